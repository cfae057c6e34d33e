#
# Copyright The polarize developers.
#
# Licensed under the MIT License. See the LICENSE file for details.
#

import json
import math
import os
from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional, Union

import numpy as np
import yaml

if TYPE_CHECKING:
    from structlog.stdlib import (
        BoundLogger,
    )

SEED_MASK = 2**64 - 1
MAX_THREADS = 8


def seed_sequence(seed: int, *keys: int) -> np.random.SeedSequence:
    """
    Deterministic seed sequence for `seed` (any Python int, reduced to 64 bits)
    and a path of non-negative integer keys.
    """
    return np.random.SeedSequence([int(seed) & SEED_MASK, *(int(k) for k in keys)])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *keys))


def derive_seed(seed: int, *keys: int) -> int:
    """
    A 63-bit child seed, reported next to each derived trial so that single
    trials can be rerun.
    """
    state = seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)[0]
    return int(state) >> 1


def thread_count() -> int:
    value = os.environ.get('POLARIZE_THREADS')
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return max(1, min(MAX_THREADS, os.cpu_count() or 1))


def nan_equal(a, b):
    """
    Compare two values with NaN values.
    """
    if isinstance(a, (float, np.floating)) and isinstance(b, (float, np.floating)):
        return a == b or (math.isnan(a) and math.isnan(b))
    elif isinstance(a, dict) and isinstance(b, dict):
        return dict_nan_equal(a, b)
    elif isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return list_nan_equal(a, b)
    else:
        return a == b


def list_nan_equal(list1, list2):
    if len(list1) != len(list2):
        return False
    return all(nan_equal(a, b) for a, b in zip(list1, list2))


def dict_nan_equal(dict1, dict2):
    if set(dict1.keys()) != set(dict2.keys()):
        return False
    return all(nan_equal(dict1[key], dict2[key]) for key in dict1)


def parse_json_argument(value: Union[str, Path]) -> Any:
    """
    Accepts either a path to a JSON file or the JSON text itself.
    """
    path = Path(value)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False
    if is_file:
        with path.open('r', encoding='utf-8') as handle:
            return json.load(handle)
    return json.loads(str(value))


def dump_report(entry_dict: dict, file_type: str) -> str:
    if file_type == 'json':
        return json.dumps(entry_dict, indent=2, sort_keys=True) + '\n'
    elif file_type == 'yaml':
        return yaml.safe_dump(entry_dict, sort_keys=True)
    raise ValueError(f'Unknown report file type "{file_type}".')


def write_report(
    entry_dict: dict,
    filename: Union[str, Path],
    logger: Optional['BoundLogger'] = None,
    *,
    overwrite: bool = False,
) -> bool:
    """
    Writes `entry_dict` as JSON or YAML depending on the file suffix. An
    existing file with different content is only replaced with `overwrite`.
    Returns whether the file now holds the report.
    """
    path = Path(filename)
    file_type = 'yaml' if path.suffix in ('.yaml', '.yml') else 'json'
    dicts_are_equal = None
    if path.exists():
        with path.open('r', encoding='utf-8') as file:
            existing_dict = (
                yaml.safe_load(file) if file_type == 'yaml' else json.load(file)
            )
        dicts_are_equal = isinstance(existing_dict, dict) and dict_nan_equal(
            existing_dict, json.loads(json.dumps(entry_dict))
        )
    if not path.exists() or overwrite or dicts_are_equal:
        path.write_text(dump_report(entry_dict, file_type), encoding='utf-8')
        return True
    message = (
        f'{path} report file already exists. '
        f'You are trying to overwrite it with a different content. '
        f'To do so, remove the existing report or pass --overwrite.'
    )
    if logger:
        logger.error(message)
    else:
        print(message)
    return False
