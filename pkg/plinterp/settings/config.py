import typing

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PLINTERP_", env_file=".env", extra="ignore")

    VERSION: str = "0.1.0"
    APP_TITLE: str = "plinterp"
    APP_DESCRIPTION: str = "Pseudo-LiDAR point cloud interpolation: warping, densification, metrics and losses"

    DEBUG: bool = False

    # depth maps
    MAX_DEPTH_M: float = 200.0
    DEPTH_PNG_SCALE: float = 256.0  # KITTI depth-completion convention
    CROP_WIDTH: int = 1216
    CROP_HEIGHT: int = 256

    # nearest-neighbour search
    KDTREE_LEAF_SIZE: int = 16

    # interpolation pipeline
    ALPHA: float = 0.5
    SYNTHESIS_MODE: str = "union"
    DENSIFY_K: int = 8
    DENSIFY_RADIUS: int = 12
    DENSIFY_MAX_K: int = 32
    SAMPLE_POINTS: int = 17500  # 0 keeps every point

    # metrics
    EMD_MAX_POINTS: int = 512

    # synthetic scenes
    SYNTH_SPARSITY: float = 0.04
    SEED: int = 0

    # harness
    JOBS: typing.Optional[int] = None  # None -> logical cores
    REPORT_FORMAT: str = "csv"
    BENCH_REPEATS: int = 5
    BENCH_BRUTE_MAX: int = 50_000


settings = Settings()
