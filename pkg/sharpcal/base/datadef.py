"""Defines DataDef base class

DataDef instances describe data inputs throughout the graph and ensure the
integrity of data continuously. These are composed of various validators that
serve both to describe approved data and check whether data passes a test.
"""

import concurrent.futures
import logging

from sharpcal.base.node import _Node
from sharpcal.base.errors import InvariantViolationError
from sharpcal.validator.validator import Validator


logger = logging.getLogger(__name__)


class _DataDef(_Node):
    """Define input data

    Node used to represent input data coming from a _Transformer instance.
    Used to check for the integrity of this data and for any characteristics
    necessary for a particular analysis.

    Attributes:
        _connection (_Transformer): Transformer instance which outputs data to
            be checked.
        _desc (list): list of Validator instances that describe approved data
            and tests input data for certain characteristics.
        parallel (bool): run validators in a process pool.
    """

    def __init__(self, parallel=False):
        """Initialize DataDef instance"""
        super().__init__()
        self.parallel = parallel
        self._desc = []

    def add_desc(self, desc):
        """Add single or multiple description validator(s)

        Arguments:
            desc (Validator, iterable): validator or list of validators to add

        Returns:
            Self with the new description. Allows for layering.
        """
        desc = desc if hasattr(desc, "__iter__") else [desc]
        for description in desc:
            if isinstance(description, Validator):
                self._desc.append(description)
            else:
                raise TypeError(f"New description must be of type \
{Validator} or an iterator of such, not {type(description)}")

        return self

    def clear_desc(self):
        """Clear descriptions

        Returns:
            Old description Validator list.
        """
        ret, self._desc = self._desc, []
        return ret

    def request(self, **kwargs):
        """Get input data and check for validity

        Returns:
            Data if no fatal validators fail, None if there is no connection.

        Raises:
            InvariantViolationError: if any fatal validator fails.
        """
        if self._connection is None:
            return None

        return self.check(self._connection.run(**kwargs))

    def report(self, data):
        """Pass data through the validator list and collect failures.

        Returns:
            Dict with "warning" and "exception" lists of messages.
        """
        report = {
            "warning": [],
            "exception": []
        }
        active = [desc for desc in self._desc if desc.is_on]

        if self.parallel and len(active) > 1:
            with concurrent.futures.ProcessPoolExecutor() as executor:

                # create a futures instance for every validator
                future_to_desc = {
                    executor.submit(desc.validate, data): desc
                    for desc in active
                }

                for future in concurrent.futures.as_completed(future_to_desc):
                    desc = future_to_desc[future]
                    _file(report, desc, future.result())
        else:
            for desc in active:
                _file(report, desc, desc.validate(data))

        return report

    def check(self, data, **kwargs):
        """Pass data through validator list.

        Returns:
            The data itself. Non-fatal failures are logged as warnings.

        Raises:
            InvariantViolationError: listing every fatal failure.
        """
        report = self.report(data)

        for warning in report["warning"]:
            logger.warning("validation warning: %s", warning)

        if len(report["exception"]) > 0:
            raise InvariantViolationError(report["exception"])

        return data

    def describe(self):
        """Describe the connection and every validator"""
        lines = [super().describe(), "Validators:"]
        lines.extend(f"- {type(val).__name__}: {val.test_desc}"
                     for val in self._desc)
        return "\n".join(lines)

    def copy(self, keep_connection=True):
        """Make a copy of instance, with option to remove original input

        Returns:
            Another instance of this class with same descriptions.
        """
        ret = type(self)(parallel=self.parallel)
        ret.set_connection(self._connection if keep_connection else None)
        ret.add_desc(self._desc.copy())
        return ret

    def __add__(self, other):
        """Add two instance's descriptions or one description to an instance

        Returns:
            Instance of class with descriptions from self and other
        """
        ret = self.copy()

        if isinstance(other, Validator):
            ret._desc.append(other)
        elif isinstance(other, _DataDef):
            ret._desc.extend(other._desc)
        else:
            raise TypeError(f"Other must be either of type {Validator} or \
{_DataDef}, not {type(other)}")

        return ret


def _file(report, desc, err):
    """Place a validator result in the report"""
    if err is None:
        return
    err_kind = "exception" if desc.fatal else "warning"
    if isinstance(err, (list, tuple)):
        report[err_kind].extend(err)
    else:
        report[err_kind].append(err)
