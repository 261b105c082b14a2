'''import classes'''

from sharpcal.base.node import _Node
from sharpcal.base.datadef import _DataDef
from sharpcal.base.transformer import _Transformer
from sharpcal.base.builder import _Builder
