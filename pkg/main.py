import logging

from fastapi import FastAPI

from harmonic_census.config import get_settings
from harmonic_census.routes import census

settings = get_settings()
logging.basicConfig(level=settings.log_level)

app = FastAPI(
    title="Harmonic Census",
    description="Zero counts of the harmonic family f_a, predicted and certified",
    version="0.1.0",
)
app.include_router(census.router)
