from typing import Any, Callable, Dict

from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from harmonic_census.exceptions import (
    CertificationError,
    InvalidParameterError,
    NearCriticalValue,
)
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.services.TheoremService import TheoremService
from harmonic_census.utils import serializers

router = APIRouter()
theorem_service = TheoremService()


def _respond(action: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    try:
        return action()
    except ValidationError as e:
        detail = e.errors(include_url=False, include_context=False, include_input=False)
        raise HTTPException(status_code=422, detail=detail)
    except InvalidParameterError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except CertificationError as e:
        raise HTTPException(status_code=409, detail=f"{type(e).__name__}: {e}")


@router.get("/v1/critical-values/{n}", tags=["Counts"])
def get_critical_values(n: int) -> Dict[str, Any]:
    """
    Critical values a_1 < ... < a_N for exponent n.
    """
    return _respond(
        lambda: serializers.critical_values_document(theorem_service.critical_values(n))
    )


@router.get("/v1/count", tags=["Counts"])
def get_count(n: int, a: float) -> Dict[str, Any]:
    """
    Zero count predicted from the critical values.
    """

    def action() -> Dict[str, Any]:
        params = FamilyParams(n=n, a=a)
        table = theorem_service.critical_values(n)
        predicted = theorem_service.predicted_count_theorem(n, a, table)
        return serializers.count_document(
            params, predicted, theorem_service.regime(params, table)
        )

    return _respond(action)


@router.get("/v1/winding", tags=["Winding"])
def get_winding(n: int, a: float) -> Dict[str, Any]:
    """
    Winding number of the caustic about the origin.
    """

    def action() -> Dict[str, Any]:
        params = FamilyParams(n=n, a=a)
        report = theorem_service.winding_service.caustic_winding(params)
        if not report.certified:
            raise NearCriticalValue(
                f"Caustic passes within {report.min_distance:.3e} of the origin"
            )
        return serializers.winding_document(params, report)

    return _respond(action)


@router.get("/v1/zeros", tags=["Census"])
def get_zeros(n: int, a: float) -> Dict[str, Any]:
    """
    Certified zeros of f_a with their orders.
    """
    return _respond(
        lambda: serializers.census_document(
            theorem_service.census_service.certify_zeros(FamilyParams(n=n, a=a))
        )
    )


@router.get("/v1/verify", tags=["Counts"])
def get_verify(n: int, a: float) -> Dict[str, Any]:
    """
    Theorem, winding and census counts side by side.
    """
    return _respond(
        lambda: serializers.verification_document(theorem_service.verify(FamilyParams(n=n, a=a)))
    )
