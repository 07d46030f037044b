from .enums import BaselineKind, FlowDirection, ReportFormat, SceneLayout, SynthesisMode
