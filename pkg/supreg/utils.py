"""
Utility functions for the superregular matrix toolkit.

Contains configuration handling, file and checksum helpers, report
formatting and small prime-number helpers shared by the CLI and the
table reproducer.
"""

import os
import copy
import json
import hashlib
import logging
from typing import Any, Dict, Iterator, List, Optional

import pandas as pd

from .exceptions import ParseError
from .prime_field import is_prime

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = 'SUPREG_THREADS'


class FileUtils:
    """Utilities for file operations."""

    @staticmethod
    def ensure_directory(filepath: str):
        """Ensure directory exists for the given filepath."""
        directory = os.path.dirname(filepath)
        if directory and not os.path.exists(directory):
            os.makedirs(directory, exist_ok=True)

    @staticmethod
    def generate_file_hash(filepath: str, algorithm: str = 'sha256') -> str:
        """Hex digest of the file content."""
        digest = hashlib.new(algorithm)
        try:
            with open(filepath, 'rb') as f:
                for chunk in iter(lambda: f.read(4096), b""):
                    digest.update(chunk)
            return digest.hexdigest()
        except OSError as e:
            logger.error(f"Error generating hash for {filepath}: {str(e)}")
            return ""

    @staticmethod
    def write_json(payload: Dict, filepath: str):
        FileUtils.ensure_directory(filepath)
        with open(filepath, 'w') as f:
            json.dump(payload, f, indent=2, default=str)

    @staticmethod
    def append_jsonl(record: Dict, filepath: str):
        """Append one JSON-lines record and flush it."""
        FileUtils.ensure_directory(filepath)
        with open(filepath, 'a') as f:
            f.write(json.dumps(record, default=str) + '\n')
            f.flush()

    @staticmethod
    def read_jsonl(filepath: str) -> Iterator[Dict]:
        """Records of a JSON-lines file; a torn last line is skipped."""
        if not os.path.exists(filepath):
            return
        with open(filepath, 'r') as f:
            for line_no, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError:
                    logger.warning(f"Skipping unreadable line {line_no} of {filepath}")


class ReportUtils:
    """Utilities for generating reports and statistics."""

    @staticmethod
    def format_duration(seconds: float) -> str:
        """Format duration in seconds to human-readable format."""
        if seconds < 60:
            return f"{seconds:.1f}s"
        elif seconds < 3600:
            return f"{seconds / 60:.1f}m"
        else:
            return f"{seconds / 3600:.1f}h"

    @staticmethod
    def records_to_frame(records: List[Dict], columns: Optional[List[str]] = None) -> pd.DataFrame:
        df = pd.DataFrame(records)
        if columns:
            df = df.reindex(columns=columns)
        return df

    @staticmethod
    def write_csv(records: List[Dict], filepath: str, columns: Optional[List[str]] = None):
        FileUtils.ensure_directory(filepath)
        ReportUtils.records_to_frame(records, columns).to_csv(filepath, index=False)
        logger.info(f"Saved {len(records)} rows to {filepath}")

    @staticmethod
    def to_csv_text(records: List[Dict], columns: Optional[List[str]] = None) -> str:
        return ReportUtils.records_to_frame(records, columns).to_csv(index=False)


class ConfigUtils:
    """Utilities for configuration management."""

    DEFAULT_CONFIG = {
        'search': {
            'threads': None,
            'chunk_size': 4096,
            'checkpoint_every': 1_000_000,
            'witness_limit': 1000,
            'node_budget': None,
        },
        'census': {
            'max_supported_gamma': 10,
        },
        'random': {
            'generator': 'numpy.PCG64',
            'default_trials': 10_000,
            'default_tail': 3,
        },
        'reproduce': {
            'table1_search_up_to': 7,
            'table2_p_max': 200,
            'table3_primes': [17, 19, 23, 29],
            'table7_primes': [173, 229, 257],
            'table7_trials': 0,
            'seed': 42,
        },
        'output': {
            'directory': 'output',
            'stats_filename': 'reproduction_stats.json',
            'include_stats': True,
            'symbolic_max_denominator': 64,
        },
    }

    @staticmethod
    def merge(base: Dict, override: Dict) -> Dict:
        """Recursive merge; `override` wins on leaves."""
        merged = copy.deepcopy(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = ConfigUtils.merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    @staticmethod
    def load_config(config_path: Optional[str] = None) -> Dict:
        """Load configuration from file or return default."""
        if config_path and os.path.exists(config_path):
            try:
                with open(config_path, 'r') as f:
                    user_config = json.load(f)
                return ConfigUtils.merge(ConfigUtils.DEFAULT_CONFIG, user_config)
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"Error loading config from {config_path}: {str(e)}")
        elif config_path:
            logger.warning(f"Config file {config_path} not found, using defaults")

        return copy.deepcopy(ConfigUtils.DEFAULT_CONFIG)

    @staticmethod
    def resolve_threads(cli_value: Optional[int] = None, config: Optional[Dict] = None) -> int:
        """--threads, then SUPREG_THREADS, then config, then the CPU count."""
        if cli_value:
            return max(1, int(cli_value))
        env_value = os.environ.get(THREADS_ENV_VAR)
        if env_value:
            try:
                return max(1, int(env_value))
            except ValueError:
                logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={env_value!r}")
        configured = (config or {}).get('search', {}).get('threads')
        if configured:
            return max(1, int(configured))
        return os.cpu_count() or 1


class PrimeUtils:
    """Prime ranges."""

    @staticmethod
    def primes_between(low: int, high: int, odd_only: bool = True) -> List[int]:
        """Primes p with low <= p <= high."""
        start = max(low, 3 if odd_only else 2)
        return [n for n in range(start, high + 1) if is_prime(n)]


def parse_csv_list(text: str) -> List[str]:
    """Split a comma-separated CLI list, rejecting empty items and embedded whitespace."""
    items = text.split(',')
    if any(not item or item != item.strip() for item in items):
        raise ParseError(f"malformed list: {text!r}")
    return items


def jsonable(value: Any) -> Any:
    """numpy scalars and arrays to plain Python for json.dumps."""
    if hasattr(value, 'tolist'):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value
