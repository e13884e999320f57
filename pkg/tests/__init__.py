# Test package for supreg
