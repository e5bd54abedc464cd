from abc import ABCMeta

from ..exceptions import ConfigError


class ABCRegistry(ABCMeta):
    """ Metaclass that registers every concrete subclass under its _registry_name so that
    configuration files can select an implementation by name. Subclasses of ABCRegistry
    keep separate registries and name the configuration key they serve in _config_key.
    """
    REGISTRY = {}
    _config_key = None

    def __new__(cls, name, bases, attrs):
        new_cls = ABCMeta.__new__(cls, name, bases, attrs)
        if getattr(new_cls, '__abstractmethods__', None):
            return new_cls
        if '_registry_name' not in attrs:
            raise TypeError('{} must define _registry_name to be registered'.format(name))
        cls.REGISTRY[attrs['_registry_name']] = new_cls
        return new_cls

    @classmethod
    def names(cls):
        return sorted(cls.REGISTRY)

    @classmethod
    def lookup(cls, name):
        """ Registered class called name; ConfigError listing the known names otherwise """
        if name not in cls.REGISTRY:
            message = 'Unknown {} "{}", choose one of {}'.format(cls._config_key, name, ', '.join(cls.names()))
            raise ConfigError(message, key=cls._config_key)
        return cls.REGISTRY[name]
