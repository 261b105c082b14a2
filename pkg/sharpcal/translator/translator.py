"""Define Translator class

Translators are the root of all data that feeds a graph. They take in a raw
document from some External source and translate it into the package's own
vocabulary before building domain objects from it, so that slightly different
spellings of a file format all reach the same scenario.
"""

from typing import Dict

from sharpcal.base import _Transformer
from sharpcal.external import External


class Translator(_Transformer):
    """Transformer fed by an External source.

    Attributes:
        _source: connection used to retrieve raw documents.
        translations: dictionary of translations from vocabulary used in the
            source to base constants. These are created on initialization and
            kept unmodified, so that documents coming through a translator
            are thought of before use.
    """

    _source: External
    translations: Dict[str, str]

    def __init__(self):
        """Initialize instance"""
        super().__init__()
        self.translations = {}

    def copy(self, *args, **kwargs):
        ret = type(self)(*args, **kwargs)
        if self._source is not None:
            ret.set_input(self._source)
        ret.add_tag(self._tags)
        ret.update_translations(self.translations)
        return ret

    def get_input(self):
        return self._source

    def set_input(self, new_input):
        """See base class"""
        if isinstance(new_input, External):
            self._source = new_input
        else:
            raise TypeError(f"new input must be of type External, not \
{type(new_input)}")
        return self

    def with_input(self, new_input):
        """See base class"""
        return self.copy().set_input(new_input)

    def req_args(self):
        return set(self._req_args)

    def update_translations(self, new_translations):
        """Update translations dictionary with new dictionary"""
        if isinstance(new_translations, dict):
            self.translations.update(new_translations)
        else:
            raise TypeError("new translations must be of type dict")
        return self

    def translate_item(self, item):
        """Translate a name or every name of a list

        Args:
            item (str, list): name or list of names to translate.

        Return:
            The translated name or a list with the translated names.
        """
        if isinstance(item, (list, tuple)):
            return [self.translations.get(elem, elem) for elem in item]
        return self.translations.get(item, item)

    def translate_doc(self, doc):
        """Recursively translate keys and type names of a JSON document"""
        if isinstance(doc, dict):
            out = {}
            for key, value in doc.items():
                key = self.translate_item(key)
                if key == "type" and isinstance(value, str):
                    value = self.translate_item(value)
                out[key] = self.translate_doc(value)
            return out
        if isinstance(doc, list):
            return [self.translate_doc(elem) for elem in doc]
        return doc
