import pytest

from avatardm.engine import load_assets

# The 26-turn book-portal customization transcript used for replay tests,
# paired with the compound scores its sentiment tool printed at the time.
TRANSCRIPT = [
    ("May i know what do you mean by providing details?", 0.0),
    ("Yes i would love to know more about searching a book functionality.", 0.7845),
    ("Yes, i prefer my system to provide detailed information of book.", 0.4019),
    ("That's great.", 0.6249),
    ("It should be simply a keyword-based searching.", 0.0),
    ("Yes please add sort the books functionality.", 0.6124),
    ("What else is included apart from pick a book under search a book functionality?", 0.0),
    ("Which other searching functionality do you offer?", 0.0),
    ("And what do you offer in keyword matching module?", 0.0),
    ("Ok i understand. How can i add advanced search?", 0.4939),
    ("Sure. Please add advanced search.", 0.6808),
    ("What?", 0.0),
    ("Okay.", 0.2263),
    ("Can you please explain?", 0.3182),
    ("Now it makes sense.", 0.0),
    ("No, i don't think so.", -0.296),
    ("I guess, i will opt in for exact match", 0.0),
    ("What else do i get in cart functionality?", 0.0),
    ("Okay i want to have the functionality of managing cart.", 0.296),
    ("What is payment gateway and how can it be useful?", 0.4404),
    ("Okay add payment gateway.", 0.2263),
    ("Yes add summary functionality", 0.4019),
    ("Yes.", 0.4019),
    ("That's good.", 0.4404),
    ("No.", -0.296),
    ("Quit", 0.0),
]

UTTERANCES = [text for text, _ in TRANSCRIPT]

# Final accept/reject outcome per named feature after the full replay.
EXPECTED_OUTCOMES = {
    "get-detailed-info": True,
    "sort-books": True,
    "advanced-search": True,
    "broad-match": False,
    "exact-match": True,
    "manage-cart": True,
    "payment-gateway": True,
    "get-summary": True,
    "set-delivery-address": True,
}


@pytest.fixture(scope="session")
def assets():
    return load_assets()


@pytest.fixture(scope="session")
def lexicon(assets):
    return assets.lexicon


@pytest.fixture(scope="session")
def transcript():
    return TRANSCRIPT


@pytest.fixture(scope="session")
def utterances():
    return list(UTTERANCES)


@pytest.fixture(scope="session")
def expected_outcomes():
    return dict(EXPECTED_OUTCOMES)
