import pytest

from blowup_embed import graphio
from blowup_embed.generators import HostRecipe, blowup, pattern_cycles, pattern_random_bounded, random_host
from blowup_embed.graph import SimpleGraph
from blowup_embed.graphio import GraphFormatError


def test_simple_graph_roundtrip():
    g = SimpleGraph.from_edges(5, [(3, 1), (0, 4), (1, 0)])
    text = graphio.dumps_graph(g)
    assert text == "graph 5\ne 0 1\ne 0 4\ne 1 3\n"
    assert graphio.loads(text) == g


def test_host_and_pattern_roundtrip(triangle, tmp_path):
    host = random_host(HostRecipe(triangle, 12, 0.5, 0.3, 0.1, seed=9))
    pattern = pattern_random_bounded(triangle, 12, 3, 0.75, seed=2)
    graphio.write(tmp_path / "h", host)
    graphio.write(tmp_path / "p", pattern)
    assert graphio.read(tmp_path / "h") == host
    assert graphio.read(tmp_path / "p") == pattern


def test_write_is_byte_stable(triangle, tmp_path):
    a = random_host(HostRecipe(triangle, 15, 0.5, 0.3, seed=5))
    b = random_host(HostRecipe(triangle, 15, 0.5, 0.3, seed=5))
    graphio.write(tmp_path / "a", a)
    graphio.write(tmp_path / "b", b)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_comments_and_blank_lines(single_edge):
    text = "# a K_{1,1}\nhost 2 1\n\nre 0 1  # the only pair\ne 0 1\n"
    host = graphio.loads(text)
    assert host == blowup(single_edge, 1)


def test_missing_cluster_records_are_inferred(triangle):
    host = blowup(triangle, 2)
    bare = "\n".join(line for line in graphio.dumps_host(host).splitlines() if not line.startswith("re"))
    assert graphio.loads(bare) == host
    p = pattern_cycles(triangle, 2)
    bare = "\n".join(line for line in graphio.dumps_pattern(p).splitlines() if not line.startswith("re"))
    assert graphio.loads(bare) == p


@pytest.mark.parametrize(
    "text, match",
    [
        ("", "empty"),
        ("graph x\n", "non-integer"),
        ("graph 2\ne 0\n", "expected 2 fields"),
        ("graph 2\npsi 0 0\n", "unexpected record"),
        ("blob 3\n", "unknown header"),
        ("graph 2\ne 0 0\n", "self-loop"),
        ("pattern 2 2\nre 0 1\npsi 0 0\n", "every vertex"),
        ("pattern 1 2\nre 0 1\npsi 0 0\npsi 0 1\n", "duplicate"),
        ("host 2 2\nre 0 1\ne 0 1\n", "inside|not an edge|cluster"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(GraphFormatError, match=match):
        graphio.loads(text)


def test_map_roundtrip_and_errors():
    assert graphio.loads_map(graphio.dumps_map([4, 2])) == {0: 4, 1: 2}
    with pytest.raises(GraphFormatError, match="twice"):
        graphio.loads_map("map 0 1\nmap 0 2\n")
    with pytest.raises(GraphFormatError):
        graphio.loads_map("e 0 1\n")


def test_write_rejects_unknown_objects(tmp_path):
    with pytest.raises(TypeError):
        graphio.write(tmp_path / "x", object())
