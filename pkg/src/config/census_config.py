"""
Census configuration parameters.
Centralizes the caps and knobs used by the search, enumeration, verification
and census components.
"""

from typing import Any, Dict, Optional
import copy
import json
import logging

logger = logging.getLogger(__name__)


def get_default_config() -> Dict[str, Any]:
    """
    Get default configuration for the census tooling.
    Every cap the library enforces is read from here.
    """
    return {
        # Automorphism search
        'search': {
            'max_degree': 256,             # refuse larger graphs
            'brute_force_max_degree': 10,  # n! oracle limit
            'brute_force_chunk': 5040      # permutations checked per numpy batch
        },

        # Connection-set enumeration
        'enumeration': {
            'max_sets': 2 ** 16,           # undirected exhaustive cap
            'directed_max_sets': 2 ** 16   # directed exhaustive cap (2^n sets)
        },

        # Structural fact checks on B
        'verification': {
            'exhaustive_order_limit': 2 ** 12,  # check every element up to this |B|
            'random_words': 10 ** 4,            # random elements checked above it
            'iota_sample_sets': 64,             # sets checked for setwise fixing by iota
            'seed': 0
        },

        # Census runs
        'census': {
            'jobs': 1,
            'chunk_size': 64,              # sets per worker task
            'confidence': 0.95,
            'bound_slack_log2': 2.0 ** -20
        }
    }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from a JSON file merged over the defaults.

    Args:
        config_path: Optional path to a JSON config file

    Returns:
        Configuration dictionary
    """
    config = get_default_config()
    if config_path:
        with open(config_path, encoding='utf-8') as fh:
            overrides = json.load(fh)
        logger.info(f"Loaded configuration overrides from {config_path}")
        config = _merge(config, overrides)
    return config


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate configuration parameters.

    Args:
        config: Configuration dictionary to validate

    Returns:
        True if configuration is valid
    """
    try:
        # Search caps
        assert config['search']['max_degree'] >= 1
        assert 1 <= config['search']['brute_force_max_degree'] <= 10
        assert config['search']['brute_force_chunk'] >= 1

        # Enumeration caps
        assert config['enumeration']['max_sets'] >= 1
        assert config['enumeration']['directed_max_sets'] >= 1

        # Verification
        assert config['verification']['exhaustive_order_limit'] >= 1
        assert config['verification']['random_words'] >= 1
        assert config['verification']['iota_sample_sets'] >= 0

        # Census
        assert config['census']['jobs'] >= 1
        assert config['census']['chunk_size'] >= 1
        assert 0 < config['census']['confidence'] < 1
        assert config['census']['bound_slack_log2'] >= 0

        return True

    except AssertionError:
        return False
    except KeyError:
        return False
