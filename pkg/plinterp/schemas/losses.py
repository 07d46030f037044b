from pydantic import BaseModel, ConfigDict, Field


class LossWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    w1: float = Field(1.0, ge=0, description="depth term weight")
    w2: float = Field(1.0, ge=0, description="reconstruction term weight")
