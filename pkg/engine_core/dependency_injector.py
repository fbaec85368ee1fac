import logging
from typing import Any, Dict, Tuple

from utils.errors import ConfigError

logger = logging.getLogger(__name__)


class DependencyContainer:
    """Named services that command modules receive as attributes.

    A module lists the attribute names it wants in ``required_services``;
    names the container does not hold keep the module's own default.
    """

    def __init__(self):
        self._services: Dict[str, Any] = {}

    def register(self, name: str, service: Any, *, replace: bool = False) -> None:
        if name in self._services and not replace:
            raise ConfigError(f"service '{name}' is already registered")
        self._services[name] = service
        logger.debug("Registered service '%s' (%s)", name, type(service).__name__)

    def resolve(self, name: str) -> Any:
        try:
            return self._services[name]
        except KeyError:
            raise ConfigError(f"service '{name}' is not registered") from None

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(sorted(self._services))

    def __contains__(self, name: str) -> bool:
        return name in self._services

    def inject_dependencies(self, target: Any) -> Tuple[str, ...]:
        """Set the registered names from ``target.required_services``; return the missing ones."""
        owner = type(target).__name__
        missing = []
        for name in getattr(target, "required_services", ()):
            if name not in self._services:
                missing.append(name)
                continue
            setattr(target, name, self._services[name])
            logger.debug("Injected '%s' into %s", name, owner)
        if missing:
            logger.warning("Services %s not registered for %s", ", ".join(missing), owner)
        return tuple(missing)
