import copy
import json
from pathlib import Path
from typing import Any, Dict, Optional
from src.utils.logger import Logger

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "numerics.json"

class ConfigManager:
    def __init__(self, config_path: Optional[str] = None):
        self.config_path = str(config_path or DEFAULT_CONFIG_PATH)
        self.config: Dict[str, Any] = {}

        self.load_config()

    def load_config(self):
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                self.config = json.load(f)
            Logger.info(f"Config loaded successfully: {self.config_path}")
        except Exception as e:
            # Code defaults still apply through get(..., default)
            Logger.error(f"Failed to load config: {e}")
            self.config = {}

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get config value using dot notation (e.g. "spectrum.classify_tolerance")
        """
        keys = key_path.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def override(self, values: Dict[str, Any]) -> "ConfigManager":
        """
        Returns a copy with dot-path overrides applied, e.g.
        {"spectrum.classify_tolerance": 1e-8}. The receiver is left untouched.
        """
        clone = ConfigManager.__new__(ConfigManager)
        clone.config_path = self.config_path
        clone.config = copy.deepcopy(self.config)
        for key_path, value in values.items():
            node = clone.config
            keys = key_path.split('.')
            for k in keys[:-1]:
                node = node.setdefault(k, {})
            node[keys[-1]] = value
        return clone


_active: Optional[ConfigManager] = None

def get_config() -> ConfigManager:
    global _active
    if _active is None:
        _active = ConfigManager()
    return _active

def set_config(manager: ConfigManager):
    global _active
    _active = manager
