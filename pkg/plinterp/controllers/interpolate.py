from plinterp.controllers.base import FrameController
from plinterp.core.exceptions import ConfigError
from plinterp.core.interpolation import FileFlowProvider, FlowProvider, ZeroFlowProvider, interpolate_frame
from plinterp.log import logger
from plinterp.models.enums import SynthesisMode
from plinterp.schemas.metrics import AggregateReport, MetricsReport
from plinterp.schemas.runs import RunConfig
from plinterp.utils.frames import discover_frames


class InterpolateController(FrameController):
    label = "interpolate"

    def check(self, config: RunConfig) -> list[str]:
        """Validate the inputs and return the flow inputs the synthesis mode reads."""
        self.require(config, "prev", "next")
        if config.flow_fwd is None and config.flow_bwd is None:
            logger.warning("no flow files given, interpolating under the static-scene assumption")
            return []
        needed = {
            SynthesisMode.FORWARD: ["flow_fwd"],
            SynthesisMode.BACKWARD: ["flow_bwd"],
            SynthesisMode.UNION: ["flow_fwd", "flow_bwd"],
        }[config.mode]
        self.require(config, *needed)
        if config.crop is not None:
            raise ConfigError("flow files are aligned to the full-size maps and cannot be combined with --crop")
        return needed

    def provider(self, paths: dict) -> FlowProvider:
        if "flow_fwd" in paths or "flow_bwd" in paths:
            return FileFlowProvider(paths.get("flow_fwd"), paths.get("flow_bwd"))
        return ZeroFlowProvider()

    def run(self, config: RunConfig) -> AggregateReport:
        """
        Interpolate every (t-1, t+1) pair: writes the dense t map and its cloud, and scores
        them when ground truth is given. Without flow files the scene is taken as static.
        """
        flows = {name: getattr(config, name) for name in self.check(config)}
        k0 = self.intrinsics(config)
        items = discover_frames(config.prev, next=config.next, gt=config.gt, **flows)

        def job(paths: dict) -> MetricsReport:
            d_prev, d_next, k = self.load_pair(paths["primary"], paths["next"], k0, config.crop)
            dense, cloud = interpolate_frame(
                d_prev,
                d_next,
                self.provider(paths),
                k,
                mode=config.mode,
                densify_params=config.densify,
                alpha=config.alpha,
                sample_points=config.sample_points or None,
                seed=config.seed,
            )
            self.write_outputs(paths["primary"].stem, dense, cloud, config)
            if "gt" in paths:
                return self.evaluate(dense, cloud, paths["gt"], k, config.crop)
            return MetricsReport(n_pred=len(cloud))

        return self.collect(self.run_frames(items, job, config), config)


interpolate_controller = InterpolateController()
