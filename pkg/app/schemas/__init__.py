from .fields import *
from .report_schemas import *
from .config_schemas import *
from .word_schemas import *
from .measure_schemas import *
