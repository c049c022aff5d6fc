import pytest

from logahoric.rootcomb import (InvalidRootDatum, LeviType, NodeSubset,
                                RootDatum, classify_cartan_block,
                                is_positive_definite_cartan,
                                levi_type_of_affine_subset,
                                parabolic_class_count, parahoric_class_count)


def test_e8_counts():
    e8 = RootDatum("E", 8)
    assert parabolic_class_count(e8) == 256
    assert parahoric_class_count(e8) == 511


def test_small_counts():
    a1 = RootDatum("A", 1)
    assert parabolic_class_count(a1) == 2
    assert parahoric_class_count(a1) == 3
    g2 = RootDatum("G", 2)
    assert parabolic_class_count(g2) == 4
    assert parahoric_class_count(g2) == 7


def test_count_relation_all_types():
    for letter, rank in [("A", 3), ("B", 4), ("C", 3), ("D", 4),
                         ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]:
        d = RootDatum(letter, rank)
        assert parahoric_class_count(d) == 2 * parabolic_class_count(d) - 1


def test_g2_contains_a2():
    g2 = RootDatum("G", 2)
    hits = []
    for nodes in [frozenset(s) for s in ([0], [1], [2], [0, 1], [0, 2], [1, 2])]:
        lt = levi_type_of_affine_subset(NodeSubset(g2, nodes, affine=True))
        if lt.blocks == (("A", 2),):
            hits.append(sorted(nodes))
    assert hits, "no affine G2 subset of Levi type A2"


def test_finite_full_subset_is_identity():
    for letter, rank in [("A", 2), ("B", 3), ("G", 2), ("F", 4)]:
        d = RootDatum(letter, rank)
        lt = levi_type_of_affine_subset(
            NodeSubset(d, frozenset(range(1, rank + 1)), affine=False))
        assert lt.blocks == ((letter, rank),)
        assert lt.torus_rank == 0


def test_a2_affine_single_node():
    a2 = RootDatum("A", 2)
    lt = levi_type_of_affine_subset(NodeSubset(a2, frozenset([1]), affine=True))
    assert lt == LeviType(blocks=(("A", 1),), torus_rank=1)


def test_blocks_are_valid_cartan():
    e7 = RootDatum("E", 7)
    lt = levi_type_of_affine_subset(
        NodeSubset(e7, frozenset([0, 1, 3, 5, 7]), affine=True))
    assert sum(r for _, r in lt.blocks) + lt.torus_rank == 7
    assert is_positive_definite_cartan([[2]])
    assert classify_cartan_block([[2, -1], [-1, 2]]) == ("A", 2)


def test_improper_subsets_rejected():
    a1 = RootDatum("A", 1)
    with pytest.raises(InvalidRootDatum):
        NodeSubset(a1, frozenset([0, 1]), affine=True)
    with pytest.raises(InvalidRootDatum):
        NodeSubset(a1, frozenset([5]), affine=True)
    with pytest.raises(InvalidRootDatum):
        RootDatum("E", 9)
