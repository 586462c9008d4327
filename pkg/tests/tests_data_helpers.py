import json
from importlib import resources


def load_phone_annotations() -> dict:
    return json.loads(
        (resources.files("starlang.data") / "phone_annotations.json").read_text()
    )


def load_annotator_reply() -> dict:
    return json.loads(
        (resources.files("starlang.data") / "phone_annotator_reply.json").read_text()
    )
