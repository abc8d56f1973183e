from harmonic_census.models.CausticModels import (
    AffineMap,
    CausticCurve,
    EpicycloidSpec,
    IntersectionRecord,
)
from harmonic_census.models.CensusModels import (
    CensusOptions,
    CensusReport,
    ZeroCertificate,
)
from harmonic_census.models.FamilyModels import FamilyParams, JacobianEval, WirtingerPair
from harmonic_census.models.TheoremModels import (
    CriticalValue,
    CriticalValueTable,
    SweepEntry,
    VerificationReport,
)
from harmonic_census.models.WindingModels import WindingOptions, WindingReport

__all__ = [
    "AffineMap",
    "CausticCurve",
    "CensusOptions",
    "CensusReport",
    "CriticalValue",
    "CriticalValueTable",
    "EpicycloidSpec",
    "FamilyParams",
    "IntersectionRecord",
    "JacobianEval",
    "SweepEntry",
    "VerificationReport",
    "WindingOptions",
    "WindingReport",
    "WirtingerPair",
    "ZeroCertificate",
]
