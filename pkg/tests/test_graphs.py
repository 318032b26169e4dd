import pytest

from critgroups.abelian import AbelianGroup, TRIVIAL_GROUP
from critgroups.exact_linalg import IntegerMatrix
from critgroups.graphs import (
    Digraph,
    Family,
    GraphSpec,
    build,
    critical_group_snf,
    digraph_json,
    is_eulerian,
    laplacian,
    reduced_laplacian,
    sandpile_group_snf,
    spanning_tree_count,
)


def db(n, d):
    return build(GraphSpec(Family.DE_BRUIJN, n, d))


def kautz(n, d):
    return build(GraphSpec(Family.KAUTZ, n, d))


def test_build_db_3_2():
    g = db(3, 2)
    # 0 -> {0,1}, 1 -> {2,0}, 2 -> {1,2}
    assert g.adjacency == ((1, 1, 0), (1, 0, 1), (0, 1, 1))


def test_build_db_d1_is_loops():
    g = db(5, 1)
    assert g.adjacency == tuple(
        tuple(1 if i == j else 0 for j in range(5)) for i in range(5))


def test_build_kautz_3_2():
    # -2 = 1 mod 3, so every v -> {v+1, v+2}: the complete digraph on 3
    g = kautz(3, 2)
    assert g.adjacency == ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def test_build_multiplicity_when_n_below_d():
    g = db(1, 4)
    assert g.adjacency == ((4,),)


def test_laplacian_db_3_2():
    assert laplacian(db(3, 2)).to_rows() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]


def test_laplacian_single_loop():
    g = Digraph(1, ((1,),))
    assert laplacian(g).to_rows() == [[0]]


def test_laplacian_kautz_3_2():
    assert laplacian(kautz(3, 2)).to_rows() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]


def test_reduced_laplacian():
    assert reduced_laplacian(db(3, 2), 0).to_rows() == [[2, -1], [-1, 1]]
    assert reduced_laplacian(kautz(3, 2), 0).to_rows() == [[2, -1], [-1, 2]]
    assert reduced_laplacian(db(4, 3), 0).to_rows() == [
        [2, 0, -1], [0, 2, -1], [-1, -1, 2]]


def test_reduced_laplacian_single_vertex():
    with pytest.raises(ValueError):
        reduced_laplacian(Digraph(1, ((1,),)), 0)


def test_spanning_tree_counts():
    assert spanning_tree_count(db(3, 2), 0) == 1
    assert spanning_tree_count(kautz(3, 2), 0) == 3
    assert spanning_tree_count(db(4, 3), 0) == 4


def test_sandpile_groups():
    assert sandpile_group_snf(db(4, 3), 0) == AbelianGroup(0, (4,))
    assert sandpile_group_snf(db(3, 2), 0) == TRIVIAL_GROUP
    assert sandpile_group_snf(db(4, 2), 0) == AbelianGroup(0, (2,))


def test_critical_groups():
    assert critical_group_snf(db(4, 3)) == AbelianGroup(0, (4,))
    assert critical_group_snf(db(2, 2)) == TRIVIAL_GROUP
    assert critical_group_snf(kautz(3, 2)) == AbelianGroup(0, (3,))


def test_is_eulerian():
    assert is_eulerian(db(7, 3))
    assert is_eulerian(kautz(5, 2))
    # edge 0 -> 1 plus a loop at 1: vertex 1 has indegree 2, outdegree 1
    assert not is_eulerian(Digraph(2, ((0, 1), (0, 1))))


@pytest.mark.parametrize("family", [Family.DE_BRUIJN, Family.KAUTZ])
def test_regularity_small_grid(family):
    for n in range(2, 17):
        for d in range(2, 10):
            g = build(GraphSpec(family, n, d))
            assert all(g.out_degree(v) == d for v in range(n))
            assert all(g.in_degree(v) == d for v in range(n))
            assert is_eulerian(g)


@pytest.mark.parametrize("family", [Family.DE_BRUIJN, Family.KAUTZ])
def test_matrix_tree_and_root_independence_small(family):
    for n in range(2, 9):
        for d in range(2, 5):
            g = build(GraphSpec(family, n, d))
            groups = set()
            for root in range(n):
                grp = sandpile_group_snf(g, root)
                assert grp.order() == spanning_tree_count(g, root)
                groups.add(grp)
            assert len(groups) == 1  # Eulerian: the root does not matter
            assert critical_group_snf(g) == groups.pop()


def test_digraph_json():
    spec = GraphSpec(Family.KAUTZ, 3, 2)
    data = digraph_json(build(spec), spec)
    assert data == {"n": 3, "adjacency": [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
                    "family": "kautz", "d": 2}


def test_graphspec_validation():
    with pytest.raises(ValueError):
        GraphSpec(Family.DE_BRUIJN, 0, 2)
    with pytest.raises(ValueError):
        GraphSpec(Family.KAUTZ, 3, 0)
    assert GraphSpec("db", 3, 2).family is Family.DE_BRUIJN
