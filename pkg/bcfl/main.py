"""FastAPI application for the BCFL simulator."""

from fastapi import FastAPI

from bcfl import __version__
from bcfl.api.routes import ledger, scenarios, security

app = FastAPI(
    title="BCFL Simulator",
    description="Deterministic blockchain-enabled federated learning simulator",
    version=__version__,
)

app.include_router(scenarios.router)
app.include_router(ledger.router)
app.include_router(security.router)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "name": "BCFL Simulator",
        "version": __version__,
        "status": "running",
    }


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
