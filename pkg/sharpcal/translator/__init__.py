from sharpcal.translator.translator import Translator

from sharpcal.translator.scenario import (
    ScenarioTranslator,
    ProbeConfigTranslator,
)

__all__ = [
    "Translator",
    "ScenarioTranslator",
    "ProbeConfigTranslator",
]
