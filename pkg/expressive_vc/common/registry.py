from typing import Any, Callable, Dict, List, Optional, TypeVar

from expressive_vc.common.logging import get_logger

logger = get_logger("registry")

T = TypeVar("T")


class ComponentType:
    """Available component types"""
    DISCRIMINATOR = "discriminator"
    GRADCHECK_SUITE = "gradcheck_suite"


class ComponentRegistry:
    """Central registry for pluggable components looked up by name"""

    _components: Dict[str, Dict[str, Any]] = {
        ComponentType.DISCRIMINATOR: {},
        ComponentType.GRADCHECK_SUITE: {}
    }

    @classmethod
    def register(cls, component_type: str, name: str) -> Callable[[T], T]:
        """Register a component class or callable with the registry

        Args:
            component_type: One of the ComponentType values
            name: Lookup name of the implementation

        Returns:
            Decorator registering the decorated object unchanged

        Raises:
            ValueError: If the component type is unknown
        """
        component_type = component_type.lower()
        name = name.lower()

        if component_type not in cls._components:
            valid_types = list(cls._components.keys())
            raise ValueError(
                f"Invalid component type '{component_type}'. Must be one of: {valid_types}"
            )

        def decorator(component: T) -> T:
            cls._components[component_type][name] = component
            logger.debug(f"Registered {component_type} component: {name}")
            return component
        return decorator

    @classmethod
    def get(cls, component_type: str, name: str) -> Optional[Any]:
        """Get a registered component, or None if the name is unknown"""
        component_type = component_type.lower()
        name = name.lower()
        if component_type not in cls._components:
            return None
        return cls._components[component_type].get(name)

    @classmethod
    def create(cls, component_type: str, name: str, **kwargs: Any) -> Any:
        """Instantiate (or call) a registered component

        Args:
            component_type: One of the ComponentType values
            name: Lookup name of the implementation
            **kwargs: Arguments forwarded to the component constructor

        Returns:
            The constructed component

        Raises:
            KeyError: If no component is registered under the name
        """
        component = cls.get(component_type, name)
        if component is None:
            raise KeyError(f"No {component_type} registered with name: {name}")
        try:
            instance = component(**kwargs)
        except Exception as e:
            logger.error(f"Failed to create {component_type} {name}: {e}")
            raise
        logger.debug(f"Created {component_type} {name}")
        return instance

    @classmethod
    def names(cls, component_type: str) -> List[str]:
        """Names registered for a component type, in registration order"""
        return list(cls._components.get(component_type.lower(), {}).keys())
