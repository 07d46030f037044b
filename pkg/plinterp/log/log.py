import sys

from loguru import logger as loguru_logger

from plinterp.core.ctx import CTX_FRAME_ID
from plinterp.settings import settings

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{extra[frame]}</cyan> | {name}:{function} - <level>{message}</level>"
)


def _attach_frame(record):
    # worker threads run in a copied context, so the frame id follows the job
    record["extra"].setdefault("frame", CTX_FRAME_ID.get())


class Loggin:
    def __init__(self) -> None:
        debug = settings.DEBUG
        if debug:
            self.level = "DEBUG"
        else:
            self.level = "INFO"

    def setup_logger(self, level: str | None = None):
        loguru_logger.remove()
        loguru_logger.configure(patcher=_attach_frame)
        loguru_logger.add(sink=sys.stderr, level=level or self.level, format=LOG_FORMAT)
        return loguru_logger


loggin = Loggin()
logger = loggin.setup_logger()
