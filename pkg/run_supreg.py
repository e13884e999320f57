#!/usr/bin/env python
"""
Simple wrapper script to run the supreg CLI
Usage: python run_supreg.py [arguments]
"""

from supreg.cli import main

if __name__ == "__main__":
    main()
