"""Define Validators used for general python objects"""

from typing import List, Tuple, Union

from sharpcal.validator.validator import Validator


class IS_TYPE(Validator):
    """Checks if data is of a certain type

    Attributes:
        _t (type, tuple): type or types of data to check for.
    """

    _t: Union[type, Tuple[type, ...]]

    def __init__(self, t, fatal=True):
        """Initialize instance

        Raises:
            TypeError: argument "t" is not a type or tuple of types.
        """
        super().__init__(fatal=fatal)

        if not isinstance(t, (type, tuple)):
            raise TypeError(f"Invalid input type {type(t)}, specify a type \
or tuple of types instead")
        self._t = t
        self.test_desc = f"Data is of type {t}"

    def validate(self, data):
        """Validates data if it is of type self._t"""
        if isinstance(data, self._t):
            return None
        return f"data is of type {type(data).__name__}, not {self._t}"


class ELEMS_TYPE(Validator):
    """Checks if all elements of an iterable are of a certain type.

    Attributes:
        _t (type, tuple): type to check the iterable's elements for.
    """

    _t: Union[type, Tuple[type, ...]]

    def __init__(self, t, fatal=True):
        super().__init__(fatal=fatal)

        if not isinstance(t, (type, tuple)):
            raise TypeError(f"Invalid input type {type(t)}, specify a type \
or tuple of types instead")
        self._t = t
        self.test_desc = f"Every element is of type {t}"

    def validate(self, data):
        """Validates data if it is an iterable with all elements of type
        self._t
        """
        if not hasattr(data, "__iter__"):
            return f"data of type {type(data).__name__} is not iterable"

        for i, elem in enumerate(data):
            if not isinstance(elem, self._t):
                return f"element {i} is of type {type(elem).__name__}, \
not {self._t}"
        return None


class HAS_KEYS(Validator):
    """Checks if a mapping has every key in a list

    Attributes:
        _keys (list): required keys.
    """

    _keys: List[str]

    def __init__(self, keys, fatal=True):
        super().__init__(fatal=fatal)

        if isinstance(keys, str):
            keys = [keys]
        elif not isinstance(keys, (list, tuple)):
            raise TypeError(f"keys must be a string or list of strings, not \
{type(keys)}")
        self._keys = list(keys)
        self.test_desc = f"Data has keys {self._keys}"

    def validate(self, data):
        if not isinstance(data, dict):
            return f"data of type {type(data).__name__} has no keys"
        missing = [k for k in self._keys if k not in data]
        if missing:
            return f"missing keys {missing}"
        return None


class IS_SERIALIZABLE(Validator):
    """Checks that data is a dict or has a .to_dict() method"""

    def __init__(self, fatal=True):
        super().__init__(fatal=fatal)
        self.test_desc = "Data is a dict or serializes through .to_dict()"

    def validate(self, data):
        if isinstance(data, dict) or hasattr(data, "to_dict"):
            return None
        return f"data of type {type(data).__name__} cannot be serialized"
