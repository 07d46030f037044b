from plinterp.controllers.base import FrameController
from plinterp.core.geometry import back_project
from plinterp.schemas.metrics import AggregateReport, MetricsReport
from plinterp.schemas.runs import RunConfig
from plinterp.utils.frames import discover_frames


class EvaluateController(FrameController):
    label = "evaluate"

    def run(self, config: RunConfig) -> AggregateReport:
        """Score predicted dense maps against ground-truth maps, frame by frame."""
        self.require(config, "pred", "gt")
        k0 = self.intrinsics(config)
        items = discover_frames(config.pred, strict=True, gt=config.gt)

        def job(paths: dict) -> MetricsReport:
            pred, (left, top) = self.load_map(paths["primary"], config.crop)
            k = k0.shifted(left, top)
            return self.evaluate(pred, back_project(pred, k), paths["gt"], k, config.crop)

        return self.collect(self.run_frames(items, job, config), config)


evaluate_controller = EvaluateController()
