#!/usr/bin/env python3
"""
Script to reproduce every published table into ./output with default scope.
"""

import sys
import os
import logging

# Add current directory to Python path
sys.path.insert(0, '.')

try:
    from supreg import TableReproducer
    from supreg.utils import ConfigUtils
except ImportError as e:
    print(f"Failed to import package: {e}", file=sys.stderr)
    sys.exit(1)


def main():
    """Reproduce all tables."""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    logger = logging.getLogger(__name__)

    config = ConfigUtils.load_config(os.environ.get('SUPREG_CONFIG'))
    output_dir = config['output']['directory']
    os.makedirs(output_dir, exist_ok=True)
    workers = ConfigUtils.resolve_threads(None, config)

    try:
        reproducer = TableReproducer(config, workers=workers)
        summary = reproducer.reproduce('all', output_dir)
    except Exception as e:
        logger.error(f"Reproduction failed: {str(e)}")
        import traceback
        traceback.print_exc()
        return False

    rep = summary['reproduction_summary']
    print("\n" + "=" * 60)
    print("REPRODUCTION SUMMARY")
    print("=" * 60)
    for table, stats in summary['table_stats'].items():
        print(f"  {table}: {stats['passed']} passed, {stats['failed']} failed, {stats['skipped']} skipped")
    print(f"Processing time: {rep['processing_time_formatted']}")
    print("\nOutput files:")
    for file_type, filepath in summary['output_files'].items():
        print(f"  {file_type}: {filepath}")
    print("=" * 60)
    return rep['rows_failed'] == 0


if __name__ == '__main__':
    success = main()
    sys.exit(0 if success else 1)
