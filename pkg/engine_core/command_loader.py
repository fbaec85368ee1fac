"""Discovery of command modules under ``modules/``."""

from __future__ import annotations

import importlib
import inspect
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.path_utils import get_home_dir


DISABLED_MODULES: set = set()


class CommandLoader:
    """
    Imports every ``modules/<name>/commands.py`` and resolves a module instance from
    - an exported ``module`` variable
    - a ``get_module(container)`` factory
    - a ``Module`` class, with or without a container argument

    Modules are registered in ascending ``priority``. A module that fails to
    import or register is logged and skipped.
    """

    def __init__(self, subparsers, container, *, modules_dir: Optional[Path] = None):
        self.subparsers = subparsers
        self.container = container
        self.modules_dir = Path(modules_dir) if modules_dir else Path(get_home_dir()) / "modules"
        self.loaded_modules: List[Dict[str, Any]] = []

    def load_all_modules(self) -> List[Dict[str, Any]]:
        candidates = []
        logging.debug("Scanning '%s' for command modules", self.modules_dir)

        for module_path in sorted(self.modules_dir.glob("*/commands.py")):
            module_name = module_path.parent.name
            if module_name in DISABLED_MODULES:
                logging.info("Skipping disabled module '%s'", module_name)
                continue
            try:
                module_spec = importlib.import_module(f"modules.{module_name}.commands")
            except Exception as exc:
                logging.exception("Failed to import command module '%s': %s", module_name, exc)
                continue

            try:
                instance = self._resolve_module_instance(module_spec)
            except Exception as exc:
                logging.exception("Error while resolving module instance for '%s': %s", module_name, exc)
                continue
            if instance is None:
                logging.warning("Module '%s' exposes no command module", module_name)
                continue
            candidates.append((getattr(instance, "priority", 100), module_name, instance))

        candidates.sort(key=lambda item: (item[0], item[1]))
        logging.debug("Module load order: %s", [name for _, name, _ in candidates])

        for priority, module_name, instance in candidates:
            self._include_module(module_name, priority, instance)
        for item in self.loaded_modules:
            item["instance"].on_startup(self.container)
        return self.loaded_modules

    def _resolve_module_instance(self, module_spec):
        if hasattr(module_spec, "module"):
            return getattr(module_spec, "module")

        get_module_fn = getattr(module_spec, "get_module", None)
        if callable(get_module_fn):
            try:
                return get_module_fn(self.container)
            except TypeError:
                logging.debug(
                    "Factory for '%s' does not accept container, retrying without it",
                    module_spec.__name__,
                )
                return get_module_fn()

        module_class = getattr(module_spec, "Module", None)
        if inspect.isclass(module_class):
            try:
                return module_class(self.container)
            except TypeError:
                return module_class()
        return None

    def _include_module(self, module_name: str, priority: int, instance) -> None:
        if not getattr(instance, "enabled", True):
            logging.info("Module '%s' is disabled", module_name)
            return
        try:
            self.container.inject_dependencies(instance)
            instance.register(self.subparsers)
        except Exception as exc:
            logging.exception("Failed to include module '%s': %s", module_name, exc)
            return
        self.loaded_modules.append({"name": module_name, "priority": priority, "instance": instance})
        logging.debug("Module '%s' loaded (priority=%s)", module_name, priority)

    def shutdown(self) -> None:
        for item in self.loaded_modules:
            try:
                item["instance"].on_shutdown()
            except Exception as exc:
                logging.exception("Error during shutdown of module '%s': %s", item["name"], exc)
