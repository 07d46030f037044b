from .config import settings as settings
