from typing import Dict, List, Optional, Type
import logging
from .base import BaseProvider, ProviderCategory


class ProviderRegistry:
    """Registry of provider classes by name."""

    _providers: Dict[str, Type[BaseProvider]] = {}

    @classmethod
    def register(cls, provider_class: Type[BaseProvider]) -> Type[BaseProvider]:
        """Register a provider class; usable as a class decorator."""
        name = provider_class.METADATA.name
        if name in cls._providers and cls._providers[name] is not provider_class:
            logging.warning(f"Provider {name} already registered. Overwriting.")
        cls._providers[name] = provider_class
        logging.debug(f"Registered provider: {name} v{provider_class.METADATA.version} "
                      f"[{provider_class.METADATA.category.name}]")
        return provider_class

    @classmethod
    def get_provider(cls, name: str) -> Optional[Type[BaseProvider]]:
        """Get a provider class by name."""
        return cls._providers.get(name)

    @classmethod
    def get_all_providers(cls) -> Dict[str, Type[BaseProvider]]:
        """Get all registered provider classes."""
        return cls._providers.copy()

    @classmethod
    def get_providers_by_category(cls, category: ProviderCategory) -> Dict[str, Type[BaseProvider]]:
        """Get provider classes by category."""
        return {name: provider for name, provider in cls._providers.items()
                if provider.METADATA.category == category}

    @classmethod
    def describe(cls) -> List[Dict[str, Optional[str]]]:
        """Metadata of every registered provider, sorted by name."""
        return [
            {
                "name": p.METADATA.name,
                "version": p.METADATA.version,
                "description": p.METADATA.description,
                "category": p.METADATA.category.name,
                "credentials_env": p.METADATA.credentials_env,
            }
            for _, p in sorted(cls._providers.items())
        ]
