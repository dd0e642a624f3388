# flake8: noqa: F401
from .generator import (
    DENSE_LAT_BOUNDS,
    DENSE_LON_BOUNDS,
    WIDE_LAT_BOUNDS,
    WIDE_LON_BOUNDS,
    GeneratorConfig,
    generate,
)
from .io import (
    FORMAT_VERSION,
    ScenarioParseError,
    load_scenario,
    save_scenario,
    scenario_from_document,
    scenario_to_document,
)
from .opportunities import Opportunities, Opportunity
from .scenario import Scenario, ScenarioValidationError
from .tasks import Tasks, TaskSpec
