import json
from pathlib import Path

from boxmodel import BehaviorBox
from errors import ValidationError
from utils import canonical_json
from wiring import WiringChain


def read_json(path) -> object:
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"file not found: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"malformed JSON in {path}: {e}")
    except UnicodeDecodeError as e:
        raise ValidationError(f"{path} is not UTF-8 text: {e}")


def load_box(path) -> BehaviorBox:
    return BehaviorBox.from_dict(read_json(path))


def load_chain(path) -> WiringChain:
    return WiringChain.from_dict(read_json(path))


def save_box(box: BehaviorBox, path):
    # канонический вид, чтобы файлы сравнивались побайтно
    Path(path).write_text(canonical_json(box.to_dict()) + "\n", encoding="utf-8")
