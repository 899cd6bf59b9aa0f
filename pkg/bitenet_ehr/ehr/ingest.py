# import libs
import logging
from datetime import date
from pathlib import Path
from typing import List, Tuple, Union
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator
# local
from .records import PatientJourney, Visit
from ..config import code_namespaces
from ..errors import IngestionError

# NOTE: logger
logger = logging.getLogger(__name__)


class VisitRecord(BaseModel):
    """A visit as it appears on a journey line."""
    admission_date: date
    discharge_date: date
    codes: List[str] = Field(..., min_length=1)

    @field_validator("codes")
    @classmethod
    def _check_namespaces(cls, value):
        for code in value:
            if not isinstance(code, str) or not code.startswith(code_namespaces) or len(code) <= 3:
                raise ValueError(f"code {code!r} lacks a dx:/px: namespace")
        return value

    @model_validator(mode="after")
    def _check_dates(self) -> "VisitRecord":
        if self.discharge_date < self.admission_date:
            raise ValueError("discharge_date precedes admission_date")
        return self


class JourneyRecord(BaseModel):
    """One line of a journey file."""
    patient_id: str = Field(..., min_length=1)
    visits: List[VisitRecord]


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(p) for p in first.get("loc", ()))
    message = first.get("msg", "invalid value")
    if first.get("type") == "too_short" and where.endswith("codes"):
        message = "visit with zero codes"
    return f"{where}: {message}" if where else message


def read_journey_records(path: Union[str, Path]) -> List[Tuple[int, JourneyRecord]]:
    """Parse every non-blank line; errors carry the line number."""
    path = Path(path)
    if not path.is_file():
        raise IngestionError("journey file not found", path=path)

    records: List[Tuple[int, JourneyRecord]] = []
    with path.open("r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append((number, JourneyRecord.model_validate_json(line)))
            except ValidationError as e:
                raise IngestionError(_describe(e), path=path, line=number) from e
    return records


def ingest_journeys(path: Union[str, Path]) -> List[PatientJourney]:
    """
    Load a journey line file.

    Dates become integer day indices relative to the earliest admission in the
    file; visits are sorted by admission day.

    Parameters
    ----------
    path : str or Path
        JSON-lines journey file.

    Returns
    -------
    list of PatientJourney
        One journey per line, in file order.

    Raises
    ------
    IngestionError
        Malformed line, unparseable date, or a visit with no codes.
    """
    records = read_journey_records(path)
    if not records:
        logger.warning(f"{path}: no journeys")
        return []

    # NOTE: epoch is the earliest admission in the file
    admissions = [v.admission_date for _, r in records for v in r.visits]
    if not admissions:
        return [PatientJourney(patient_id=r.patient_id, visits=()) for _, r in records]
    epoch = min(admissions)

    journeys: List[PatientJourney] = []
    for number, record in records:
        try:
            visits = sorted(
                (
                    Visit(
                        codes=tuple(v.codes),
                        admission_day=(v.admission_date - epoch).days,
                        discharge_day=(v.discharge_date - epoch).days,
                    )
                    for v in record.visits
                ),
                key=lambda v: (v.admission_day, v.discharge_day),
            )
            journeys.append(PatientJourney(patient_id=record.patient_id, visits=tuple(visits)))
        except ValidationError as e:
            raise IngestionError(_describe(e), path=path, line=number) from e

    logger.info(f"ingested {len(journeys)} journeys from {path}")
    return journeys
