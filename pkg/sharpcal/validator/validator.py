"""Define Validator class

Validators are the building blocks of input integrity in the graph. Each one
checks a single property of a scenario document, a distribution or a
scenario, so that a failure names exactly which invariant broke.
"""


class Validator:
    """Check for some characteristic of a piece of data

    Validators can have any attribute needed, but functionality is stored
    in the .validate function, which returns any errors in the data.

    Attributes:
        fatal (bool): whether invalid data stops the graph. Non-fatal
            failures are logged as warnings and the data passes on.
        is_on (bool): whether the validator runs at all.
        test_desc (str): description of the test performed on data.
    """

    fatal: bool
    is_on: bool
    test_desc: str

    def __init__(self, fatal=True):
        self.fatal = fatal
        self.is_on = True
        self.test_desc = "Validates condition"

    def validate(self, data):
        """Validate data

        Returns:
            A message or list of messages describing every failure, or None
            if data is valid.
        """
        raise NotImplementedError()

    def fatal_on(self):
        """Turn fatal on and return self"""
        self.fatal = True
        return self

    def fatal_off(self):
        """Turn fatal off and return self"""
        self.fatal = False
        return self

    def __repr__(self):
        return f"{type(self).__name__}(fatal={self.fatal})"
