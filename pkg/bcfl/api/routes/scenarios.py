"""Batch scenario runs over REST."""

import logging
from typing import Any

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from bcfl.config import MAX_SEED, get_default_scenario, parse_scenario, with_seed
from bcfl.errors import ConfigurationError, RoundError
from bcfl.harness import CSV_COLUMNS, run_scenario
from bcfl.harness.export import metrics_rows

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/scenarios", tags=["scenarios"])


class RunRequest(BaseModel):
    """Scenario run request; without a scenario the shipped default runs."""

    scenario: dict[str, Any] | None = None
    seed: int | None = Field(None, ge=0, le=MAX_SEED, description="Seed override")


@router.get("/default")
def default_scenario():
    """The shipped default scenario with all defaults applied."""
    return get_default_scenario().model_dump(mode="json")


@router.post("/run")
def run(request: RunRequest):
    """Run a scenario to completion and return its summary and per-round metrics."""
    try:
        config = (
            parse_scenario(request.scenario)
            if request.scenario is not None
            else get_default_scenario()
        )
        if request.seed is not None:
            config = with_seed(config, request.seed)
    except ConfigurationError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e

    try:
        result = run_scenario(config)
    except RoundError as e:
        logger.warning("scenario '%s' failed: %s", config.name, e)
        raise HTTPException(status_code=500, detail=str(e)) from e

    return {
        "summary": result.summary.to_dict(),
        "columns": list(CSV_COLUMNS),
        "rounds": metrics_rows(config.name, result.metrics),
    }
