# -*- coding: utf-8 -*-

from .misc import get_config_from_file, get_config_from_keyvalue_file, parse_dotlist_lines
from .utils import get_logger, logger, setup_logging, stage_timer
