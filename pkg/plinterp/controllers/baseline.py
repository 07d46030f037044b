from plinterp.controllers.base import FrameController
from plinterp.core.interpolation import average_frame, optical_flow_frame
from plinterp.io import read_optical_flow
from plinterp.models.enums import BaselineKind
from plinterp.schemas.flow import OpticalFlow
from plinterp.schemas.geometry import DepthMap
from plinterp.schemas.metrics import AggregateReport, MetricsReport
from plinterp.schemas.runs import RunConfig
from plinterp.utils.frames import discover_frames


class BaselineController(FrameController):
    def load_flow(self, path, like: DepthMap, config: RunConfig) -> OpticalFlow:
        """Read an optical flow, cut to the same bottom window as the maps when cropping."""
        of = read_optical_flow(path)
        if config.crop is None or (of.height, of.width) == like.shape:
            return of
        left = (of.width - like.width) // 2
        top = of.height - like.height
        return OpticalFlow(vectors=of.vectors[top : top + like.height, left : left + like.width])

    def run(self, config: RunConfig, which: BaselineKind) -> AggregateReport:
        """Image-plane baselines through the same outputs and evaluation as ``interpolate``."""
        label = f"baseline-{which}"
        self.require(config, "prev", "next", label=label)
        if which == BaselineKind.OPTICAL_FLOW:
            self.require(config, "optical_fwd", "optical_bwd", label=label)
        k0 = self.intrinsics(config)
        items = discover_frames(
            config.prev,
            next=config.next,
            optical_fwd=config.optical_fwd if which == BaselineKind.OPTICAL_FLOW else None,
            optical_bwd=config.optical_bwd if which == BaselineKind.OPTICAL_FLOW else None,
            gt=config.gt,
        )

        def job(paths: dict) -> MetricsReport:
            d_prev, d_next, k = self.load_pair(paths["primary"], paths["next"], k0, config.crop)
            if which == BaselineKind.AVERAGE:
                dense, cloud = average_frame(d_prev, d_next, k, config.densify)
            else:
                of_fwd = self.load_flow(paths["optical_fwd"], d_prev, config)
                of_bwd = self.load_flow(paths["optical_bwd"], d_prev, config)
                dense, cloud = optical_flow_frame(d_prev, d_next, of_fwd, of_bwd, k, config.densify, config.alpha)
            self.write_outputs(paths["primary"].stem, dense, cloud, config)
            if "gt" in paths:
                return self.evaluate(dense, cloud, paths["gt"], k, config.crop)
            return MetricsReport(n_pred=len(cloud))

        return self.collect(self.run_frames(items, job, config), config, label=label)


baseline_controller = BaselineController()
