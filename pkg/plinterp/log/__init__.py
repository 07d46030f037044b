from .log import loggin as loggin
from .log import logger as logger
