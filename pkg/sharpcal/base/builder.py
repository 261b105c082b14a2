"""Define extra utility classes used throughout the package

These classes implement certain interfaces used in specific cases and are not
constrained by an object's parent class.
"""

from typing import Dict, Any

from collections import namedtuple


class _Builder:
    """Interface for setting and assembling pieces.

    Builders choose between interchangeable strategies (for example the
    perturbation basis of the sharpness probe) and store their arguments
    before anything is run.

    Attributes:
        piece (type): namedtuple singleton for piece generation
        _pieces (dict): piece name to (option name, args, kwargs).
        _PIECE_OPTIONS (dict): piece name to the option names it accepts.
    """

    piece = namedtuple("piece",
                       "name, args, kwargs",
                       module="_Builder",
                       defaults=[None, tuple(), dict()])

    _PIECE_OPTIONS: Dict[str, Any] = {}

    _pieces: Dict[str, Any]

    def set_piece(self, param, name, *args, **kwargs):
        """Set a piece name, positional arguments and keyword arguments

        Args:
            param (str): piece slot, such as "basis".
            name (str): option chosen for that slot, such as "sine".
            *args: piece positional arguments.
            **kwargs: piece keyword arguments.
        """
        self.check_name(param, name)
        self._pieces[param] = self.piece(name, args, kwargs)
        return self

    def _init_piece(self, params, defaults=None):
        """Initialize piece dictionary given a list of piece names.

        Args:
            params (list): list of piece names to be initialized.
            defaults (dict): optional default option name per piece.
        """
        defaults = defaults or {}
        self._pieces = {p: self.piece(defaults.get(p)) for p in params}

    def check_name(self, param, name):
        """Check if name and parameter combination is valid.

        Args:
            param (str): name of the key in the piece dictionary.
            name (str): option to be set to the piece.

        Raises:
            KeyError: if param is not a piece slot.
            ValueError: if name is not an option of that slot.
        """
        if param not in self._pieces:
            raise KeyError(f"invalid parameter {param}, select one of \
{list(self._pieces.keys())}")
        if name is None:
            raise ValueError("Please specify a valid name")
        options = self._PIECE_OPTIONS.get(param)
        if options is not None and name not in options:
            raise ValueError(f"invalid option {name} for {param}, select \
one of {list(options)}")
