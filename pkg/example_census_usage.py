"""
Zero counts of f_a for n = 4 at the three sample parameters 1.1, 1.37 and 3.54,
computed from the critical values, from the caustic winding and by certified census.
"""

import logging

from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.services.TheoremService import TheoremService

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def main() -> None:
    service = TheoremService()
    table = service.critical_values(4)
    logger.info(f"Critical values for n=4: {table.a_values}")
    for a in (1.1, 1.37, 3.54):
        report = service.verify(FamilyParams(n=4, a=a))
        logger.info(
            f"a={a}: theorem {report.predicted_theorem}, winding {report.predicted_winding},"
            f" census {report.census_total} ({report.z_plus} sense-preserving,"
            f" {report.z_minus} sense-reversing)"
        )
    census = service.census_service.certify_zeros(FamilyParams(n=4, a=1.37))
    print(census.to_dataframe().to_string(index=False))


if __name__ == "__main__":
    main()
