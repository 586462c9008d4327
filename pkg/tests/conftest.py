from importlib import resources

import pytest

from starlang.parser import parse_domain


def data_text(name: str) -> str:
    return (resources.files("starlang.data") / name).read_text()


@pytest.fixture(scope="session")
def phone_story_text() -> str:
    return data_text("phone_story.star")


@pytest.fixture(scope="session")
def phone_knowledge_text() -> str:
    return data_text("phone_knowledge.star")


@pytest.fixture(scope="session")
def phone_domain_text() -> str:
    return data_text("phone.star")


@pytest.fixture(scope="session")
def phone_domain(phone_domain_text):
    result = parse_domain(phone_domain_text)
    assert result.domain is not None, [d.render() for d in result.diagnostics]
    return result.domain


@pytest.fixture(scope="session")
def phone_reports(phone_domain):
    from starlang.reasoner import read_story

    return read_story(phone_domain)
