"""Security rubric inspection."""

from fastapi import APIRouter

from bcfl.adversary import shipped_calibration

router = APIRouter(prefix="/api/security", tags=["security"])


@router.get("/calibration")
async def get_calibration():
    """Shipped rubric weights and baseline credits."""
    return shipped_calibration().model_dump(mode="json")
