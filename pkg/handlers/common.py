import json

from boxmodel import BehaviorBox, check_no_signaling, chsh_canonical, chsh_max, correlators
from errors import NumericError
from utils import canonical_json

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2


def box_report(box: BehaviorBox) -> dict:
    value, maximizers = chsh_max(box)
    return {
        "correlators": correlators(box).as_list(),
        "chsh_canonical": chsh_canonical(box),
        "chsh_max": value,
        "chsh_max_facets": maximizers,
        "no_signaling": check_no_signaling(box).to_dict(),
    }


def emit(payload) -> str:
    return canonical_json(payload) + "\n"


def exit_code_for(error: Exception) -> int:
    if isinstance(error, NumericError):
        return EXIT_NUMERIC
    return EXIT_VALIDATION


def error_line(error: Exception) -> str:
    # одна строка JSON для stderr
    kind = "numeric" if isinstance(error, NumericError) else "validation"
    return json.dumps({"error": kind, "type": type(error).__name__, "message": str(error)}, sort_keys=True)
