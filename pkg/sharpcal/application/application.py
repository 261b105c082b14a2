"""Define the Application class

While Models are normally the last stage of the processing chain, their
single output still has to reach the outside world. Applications take in
graph data and hand it to External outputs, such as report files.
"""

from typing import Dict

from sharpcal.model import Model
from sharpcal.external import External


class Application(Model):
    """Represent final representation of graph data through external entities.

    Applications are transformations with one or more internal inputs and one
    or more external outputs.

    Attributes:
        _out (dict): dictionary of outside output connections
    """

    _out: Dict[str, External]

    def __init__(self):
        """Initialize instance.

        Outputs are initialized the same way sources are, through the
        _init_output() method.
        """
        super().__init__()
        self._out = {}

    def run(self, **kwargs):
        """Run application.

        This will be the bulk of subclass functionality. It is where all
        data is sourced, processed and output.
        """
        raise NotImplementedError()

    def copy(self, *args, **kwargs):
        ret = super().copy(*args, **kwargs)
        ret._out = self._out.copy()
        return ret

    def _get_output(self, output_name):
        """Get the External instance set to an output name.

        Raises:
            KeyError: if name is not in the output dict.
            ValueError: if no output was set under that name.
        """
        if output_name not in self._out:
            raise KeyError(f"{output_name} is not a valid output, select one \
of {list(self._out)}")
        if self._out[output_name] is None:
            raise ValueError(f"output {output_name} has not been set")
        return self._out[output_name]

    def set_output(self, output_name, new_output):
        """Set a new External output under an initialized name

        Raises:
            KeyError: if name is not in the output dict.
            TypeError: if the new output is not an instance of External.
        """
        if output_name not in self._out:
            raise KeyError(f"{output_name} is not a valid output, select one \
of {list(self._out)}")
        if not isinstance(new_output, External):
            raise TypeError(f"new output must be an instance of type \
External, not {type(new_output)}")
        self._out[output_name] = new_output
        return self

    def with_output(self, output_name, new_output):
        """Return a copy of this application with the output changed"""
        return self.copy().set_output(output_name, new_output)

    def _init_output(self, outputs):
        """Initialize outputs

        Args:
            outputs (iterable): contains keys for the output dict.

        Raises:
            TypeError: if the outputs argument is not an iterable
        """
        if not hasattr(outputs, "__iter__") or isinstance(outputs, str):
            raise TypeError("please specify an iterable to the outputs \
argument")
        self._out = {out: None for out in outputs}
