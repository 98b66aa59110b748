"""Ledger verification over REST."""

import base64
import binascii

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from bcfl.errors import LedgerFormatError
from bcfl.ledger import decode_ledger, validate_chain

router = APIRouter(prefix="/api/ledger", tags=["ledger"])


class VerifyRequest(BaseModel):
    """Ledger file contents, base64 encoded."""

    ledger: str
    tip: str | None = Field(None, min_length=64, max_length=64, description="Expected tip hash")


@router.post("/verify")
def verify(request: VerifyRequest):
    """Decode and validate a ledger."""
    try:
        data = base64.b64decode(request.ledger, validate=True)
    except binascii.Error as e:
        raise HTTPException(status_code=400, detail=f"ledger is not base64: {e}") from e
    try:
        anchor = bytes.fromhex(request.tip) if request.tip is not None else None
    except ValueError as e:
        raise HTTPException(status_code=422, detail="tip must be hex") from e

    try:
        chain = decode_ledger(data)
    except LedgerFormatError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e

    validation = validate_chain(chain, expected_tip=anchor)
    return {
        "ok": validation.ok,
        "blocks": len(chain),
        "firstInvalidIndex": validation.first_invalid_index,
        "reason": validation.reason,
        "tip": chain.tip_hash.hex(),
    }
