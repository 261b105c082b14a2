"""Translators building scenarios and probe configurations from files"""

import logging

from sharpcal.base.constants import (
    HORIZON,
    MIXTURE,
    NORMAL,
    TABULATED_QUANTILE,
    TRUTHS,
    UNIFORM,
)
from sharpcal.base.errors import ParseError
from sharpcal.calib import Scenario
from sharpcal.dist import build_distribution
from sharpcal.scenarios import ScenarioSpec, build_scenario, make_block_repeat
from sharpcal.translator.translator import Translator


logger = logging.getLogger(__name__)

_ALIASES = {
    "horizon": HORIZON,
    "mean": "mu",
    "loc": "mu",
    "sd": "sigma",
    "std": "sigma",
    "scale": "sigma",
    "lo": "a",
    "hi": "b",
    "gaussian": NORMAL,
    "uni": UNIFORM,
    "tabulated": TABULATED_QUANTILE,
    "mix": MIXTURE,
}


class ScenarioTranslator(Translator):
    """Build a Scenario from a scenario document or a ScenarioSpec document

    Documents with a "family" key are scenario specs and go through the
    family constructors; any other document is a plain scenario file.

    The optional T request argument turns the translator into a scenario
    generator: block_repeat specs are built at horizon T and any other
    scenario is block-repeated up to T.
    """

    def __init__(self):
        super().__init__()
        self.update_translations(_ALIASES)

    def run(self, **kwargs):
        """Request the document and build the scenario

        Args:
            **kwargs: Optional request arguments
                T: horizon of the generated scenario.
        """
        doc = self.translate_doc(self._source.request())
        T = kwargs.get(HORIZON)

        if isinstance(doc, dict) and "family" in doc:
            spec = ScenarioSpec.from_dict(doc)
            if T is not None and spec.params.get(HORIZON) is not None:
                spec = ScenarioSpec(spec.family,
                                    {**spec.params, HORIZON: T},
                                    spec.seed)
            scenario = build_scenario(spec)
        else:
            scenario = Scenario.from_spec(doc)

        if T is not None and scenario.T != T:
            logger.debug("repeating T=%d scenario up to T=%d", scenario.T, T)
            scenario = make_block_repeat(scenario, T)
        return scenario


class ProbeConfigTranslator(Translator):
    """Build the arguments of the sharpness search from a probe config

    The config holds truths (distribution specs), budget, seed, basis_size
    and optionally basis and knots.
    """

    _KEYS = ("budget", "seed", "basis_size", "basis", "knots")

    def __init__(self):
        super().__init__()
        self.update_translations(_ALIASES)

    def run(self, **kwargs):
        doc = self.translate_doc(self._source.request())
        if not isinstance(doc, dict) or TRUTHS not in doc:
            raise ParseError("probe config must be an object with truths")
        if not isinstance(doc[TRUTHS], list):
            raise ParseError("truths must be a list of distribution specs")

        config = {key: doc[key] for key in self._KEYS if key in doc}
        config[TRUTHS] = [build_distribution(d) for d in doc[TRUTHS]]
        return config
