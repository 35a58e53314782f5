import copy
import logging
import yaml
from pathlib import Path
from typing import Dict, Any, Optional

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Any] = {
    'cache': {
        'strategy': 'cachealot',
        'canonize': False,
        'bloom_bits': 1024,
        'lookup_timeout_ms': 100,
        'optimisations': {'o1': True, 'o2': True, 'o3': True},
    },
    'solver': {
        'command': 'z3 -in',
        'input': 'stdin',
        'timeout': 30,
    },
    'reporting': {
        'format': 'json',
        'include_file_records': False,
    },
    'execution': {
        'parallel_suites': False,
        'max_workers': 4,
        'repeat': 1,
    },
    'logging': {
        'level': 'WARNING',
        'format': '%(levelname)s %(name)s: %(message)s',
    },
    'generator': {
        'files': 200,
        'unsat_share': 0.6,
        'quantified_share': 0.2,
        'min_cycle': 3,
        'max_cycle': 5,
        'min_chain': 3,
        'max_chain': 6,
        'max_filler': 5,
    },
}


class Settings:
    """Configuration management for the unsat core cache"""

    def __init__(self, config_path: Optional[str] = None):
        if config_path is None:
            config_path = Path(__file__).parent.parent.parent / "config" / "config.yaml"
        self.config_path = Path(config_path)
        self.config = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file"""
        try:
            with open(self.config_path, 'r') as file:
                config = yaml.safe_load(file) or {}
                if not isinstance(config, dict):
                    raise yaml.YAMLError(f"top level must be a mapping, got {type(config).__name__}")
                return config
        except FileNotFoundError:
            logger.warning(f"Config file not found at {self.config_path}, using defaults")
            return self.get_default_config()
        except yaml.YAMLError as e:
            logger.warning(f"Error parsing config file: {e}")
            return self.get_default_config()

    def get_default_config(self) -> Dict[str, Any]:
        """Return default configuration"""
        return copy.deepcopy(DEFAULT_CONFIG)

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation"""
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def update(self, key: str, value: Any) -> None:
        """Update configuration value using dot notation"""
        keys = key.split('.')
        config_ref = self.config

        # Navigate to the parent of the target key
        for k in keys[:-1]:
            if not isinstance(config_ref.get(k), dict):
                config_ref[k] = {}
            config_ref = config_ref[k]

        config_ref[keys[-1]] = value

# This is the global settings instance
settings = Settings()
