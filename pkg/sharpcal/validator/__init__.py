from sharpcal.validator.validator import Validator

from sharpcal.validator.base_val import *
