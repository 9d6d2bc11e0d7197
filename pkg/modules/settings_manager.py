"""
Persisted user settings for the command-line tool.
"""
import copy
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import CHUNK_SIZE, DEFAULT_THREADS, MAX_ENUMERATION, MAX_FIELD_ORDER, OUTPUT_DIR, SETTINGS_FILE
from .parallel import ProgressCallback, ScanOptions


class SettingsManager:
    """JSON settings merged over defaults, addressed with dotted keys."""

    def __init__(self, settings_file: str = SETTINGS_FILE):
        self.settings_file = Path(settings_file)
        self.default_settings = {
            'limits': {
                'max_enum': MAX_ENUMERATION,
                'max_field_order': MAX_FIELD_ORDER,
            },
            'parallel': {
                'threads': DEFAULT_THREADS,
                'chunk_size': CHUNK_SIZE,
            },
            'output': {
                'directory': str(OUTPUT_DIR),
                'json': False,
            },
            'recent_outputs': [],
        }
        self.last_error: Optional[str] = None
        self.settings = self.load_settings()

    def load_settings(self) -> Dict[str, Any]:
        """Load settings from file, falling back to defaults."""
        try:
            if self.settings_file.exists():
                with open(self.settings_file, 'r', encoding='utf-8') as f:
                    loaded_settings = json.load(f)
                if not isinstance(loaded_settings, dict):
                    raise ValueError("settings file must hold a JSON object")
                return self._merge_with_defaults(loaded_settings)
        except (OSError, ValueError) as e:
            self.last_error = f"Error loading settings: {e}"
        return copy.deepcopy(self.default_settings)

    def save_settings(self) -> bool:
        try:
            self.settings_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.settings_file, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, indent=2, ensure_ascii=False)
            return True
        except OSError as e:
            self.last_error = f"Error saving settings: {e}"
            return False

    def _merge_with_defaults(self, loaded_settings: Dict[str, Any]) -> Dict[str, Any]:
        merged = copy.deepcopy(self.default_settings)

        def deep_merge(target: Dict, source: Dict):
            for key, value in source.items():
                if key in target and isinstance(target[key], dict) and isinstance(value, dict):
                    deep_merge(target[key], value)
                else:
                    target[key] = value

        deep_merge(merged, loaded_settings)
        return merged

    def get(self, key: str, default: Any = None) -> Any:
        value = self.settings
        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> bool:
        """Set a value, coerced to the type of its default; unknown keys are rejected."""
        keys = key.split('.')
        default = self.default_settings
        for k in keys:
            if not isinstance(default, dict) or k not in default:
                raise KeyError(f"unknown setting {key!r}")
            default = default[k]
        if isinstance(default, dict):
            raise KeyError(f"{key!r} is a section, not a setting")
        target = self.settings
        for k in keys[:-1]:
            target = target.setdefault(k, {})
        target[keys[-1]] = self._coerce(value, default)
        return self.save_settings()

    @staticmethod
    def _coerce(value: Any, default: Any) -> Any:
        if not isinstance(value, str):
            return value
        if isinstance(default, bool):
            lowered = value.strip().lower()
            if lowered not in ('true', 'false', '1', '0', 'yes', 'no'):
                raise ValueError(f"expected a boolean, got {value!r}")
            return lowered in ('true', '1', 'yes')
        if isinstance(default, int):
            return int(value)
        if isinstance(default, list):
            return [part for part in value.split(',') if part]
        return value

    def add_recent_output(self, output_path: str, max_recent: int = 10):
        recent_list: List[str] = [p for p in self.settings.get('recent_outputs', []) if p != output_path]
        recent_list.insert(0, output_path)
        self.settings['recent_outputs'] = recent_list[:max_recent]
        self.save_settings()

    def get_recent_outputs(self) -> List[str]:
        return list(self.settings.get('recent_outputs', []))

    def reset_to_defaults(self) -> bool:
        self.settings = copy.deepcopy(self.default_settings)
        return self.save_settings()

    def scan_options(self, max_enum: Optional[int] = None, threads: Optional[int] = None,
                     progress_callback: Optional[ProgressCallback] = None) -> ScanOptions:
        """ScanOptions from the settings, with command-line overrides."""
        return ScanOptions(
            max_enum=int(max_enum if max_enum is not None else self.get('limits.max_enum')),
            threads=int(threads if threads else self.get('parallel.threads')) or DEFAULT_THREADS,
            chunk_size=int(self.get('parallel.chunk_size')),
            progress_callback=progress_callback,
        )
