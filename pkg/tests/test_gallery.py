import pytest

from gallery import CASES, GalleryError, run_case, run_gallery
from tree_builder import create_gallery_tree


@pytest.mark.parametrize("name", list(CASES))
def test_gallery_case_matches_expectations(name):
    result = run_case(name, verbose=False)
    mismatches = [(o.label, o.expected, o.actual) for o in result.outcomes if not o.ok]
    assert not mismatches
    assert result.passed


def test_unknown_case():
    with pytest.raises(GalleryError):
        run_case("moebius", verbose=False)


def test_gallery_tree_lists_every_check():
    results = run_gallery(["square-structure", "triangle-structure"], verbose=False)
    tree = create_gallery_tree(results)
    assert tree.contains("square-structure")
    assert len(tree.children("triangle-structure")) == len(results[1].outcomes)
