"""Ext groups, the Yoneda product, and extension sequences.

Frozen dimensions: over A = k[x]/(x^3) the module k has the periodic
resolution ... -> A --x--> A --x^2--> A -> k, so Ext^i(k, k) is
one-dimensional in every degree.  Over the radical-square-zero A3 quiver
the Ext algebra of the simples is the path combinatorics: one-dimensional
Ext^1 along each arrow, one-dimensional Ext^2 along the length-two path,
and the product of the two arrow classes generates it.
"""

from random import Random

import pytest

from roofext.algebra import direct_sum, hom_space
from roofext.errors import MiddleMismatchError, TruncationError
from roofext.ext import (
    SPLICE_PRODUCT_SIGN,
    ExtensionSeq,
    class_of_extension,
    ext0_from_hom,
    ext_group,
    extension_from_class,
    free_resolution,
    is_trivial,
    splice,
    yoneda_product,
)
from roofext.instances import (
    ka3_first_step,
    ka3_second_step,
    ka3_simples,
    kx3_regular,
    kx3_simple,
    random_ses_pair,
    random_ses_triple,
)
from roofext.linalg import GF, QQ

F2 = GF(2)
F3 = GF(3)


# -- resolutions ----------------------------------------------------------------


def test_resolution_is_a_complex():
    k = kx3_simple(QQ)
    res = free_resolution(k, 4)
    assert res.truncation >= 4
    assert (res.augmentation @ res.map(1)).is_zero()
    for t in range(1, 4):
        assert (res.map(t) @ res.map(t + 1)).is_zero()


def test_resolution_of_kx3_simple_is_periodic():
    k = kx3_simple(F3)
    res = free_resolution(k, 5)
    assert res.ranks[:6] == [1, 1, 1, 1, 1, 1]


def test_resolution_grows_in_place():
    k = kx3_simple(F2)
    r1 = free_resolution(k, 1)
    r2 = free_resolution(k, 3)
    assert r1 is r2  # cached and extended, never rebuilt
    assert r2.truncation >= 3


def test_resolution_of_free_module_is_trivial():
    amb = kx3_regular(QQ)
    res = free_resolution(amb, 3)
    assert res.ranks == [1, 0, 0, 0]


# -- Ext dimensions ---------------------------------------------------------------


@pytest.mark.parametrize("field", [QQ, F2, F3])
def test_ext_of_kx3_simple_all_degrees(field):
    k = kx3_simple(field)
    for i in range(5):
        dim, basis = ext_group(k, k, i)
        assert dim == 1 and len(basis) == 1


def test_ext_vanishes_on_free_source():
    amb = kx3_regular(QQ)
    k = kx3_simple(QQ)
    for i in (1, 2, 3):
        assert ext_group(amb, k, i)[0] == 0


def test_ext0_is_hom():
    amb = kx3_regular(QQ)
    k = kx3_simple(QQ)
    for m, n in [(k, k), (amb, k), (amb, amb), (k, amb)]:
        assert ext_group(m, n, 0)[0] == len(hom_space(m, n))


def test_ext0_from_hom_embedding():
    k = kx3_simple(F3)
    h = hom_space(k, k)[0]
    cls = ext0_from_hom(h)
    assert cls.degree == 0 and not cls.is_zero()


def test_ka3_ext_dimensions():
    s1, s2, s3 = ka3_simples(QQ)
    assert ext_group(s1, s2, 1)[0] == 1
    assert ext_group(s2, s3, 1)[0] == 1
    assert ext_group(s1, s3, 2)[0] == 1
    # and the directions with no arrows or paths carry nothing
    assert ext_group(s2, s1, 1)[0] == 0
    assert ext_group(s1, s3, 1)[0] == 0
    assert ext_group(s3, s1, 2)[0] == 0


def test_truncation_error():
    k = kx3_simple(QQ)
    with pytest.raises(TruncationError):
        ext_group(k, k, 2, truncate=2)
    dim, _ = ext_group(k, k, 2, truncate=3)
    assert dim == 1
    with pytest.raises(ValueError):
        ext_group(k, k, -1)


# -- Yoneda products ---------------------------------------------------------------


def test_nonzero_product_on_ka3():
    """The two arrow classes compose to the length-two path class."""
    s1, s2, s3 = ka3_simples(QQ)
    _, (a,) = ext_group(s1, s2, 1)
    _, (b,) = ext_group(s2, s3, 1)
    prod = yoneda_product(a, b)
    assert prod.degree == 2
    assert prod.source == s1 and prod.target == s3
    assert not prod.is_zero()


def test_product_middle_mismatch():
    s1, s2, s3 = ka3_simples(QQ)
    _, (a,) = ext_group(s1, s2, 1)
    with pytest.raises(MiddleMismatchError, match="middle"):
        yoneda_product(a, a)
    _, (b,) = ext_group(s2, s3, 1)
    with pytest.raises(MiddleMismatchError):
        yoneda_product(b, a)  # wrong order


def test_product_with_ext0_identity():
    k = kx3_simple(QQ)
    ident = ext0_from_hom(hom_space(k, k)[0])
    _, (a,) = ext_group(k, k, 1)
    assert yoneda_product(ident, a) == a
    assert yoneda_product(a, ident) == a


def test_product_bilinearity(rng):
    for field in (F2, F3):
        e1, e2 = random_ses_pair(rng, field)
        a = class_of_extension(e1)
        b = class_of_extension(e2)
        two_a = a + a
        assert yoneda_product(two_a, b) == yoneda_product(a, b) + yoneda_product(a, b)
        c = 1 if field.p == 2 else 2
        assert yoneda_product(a.scale(c), b) == yoneda_product(a, b.scale(c))


def test_product_associative_on_random_triples():
    rng = Random(0xACC)
    for trial in range(4):
        field = F2 if trial % 2 else F3
        e1, e2, e3 = random_ses_triple(rng, field)
        a, b, c = (class_of_extension(e) for e in (e1, e2, e3))
        left = yoneda_product(yoneda_product(a, b), c)
        right = yoneda_product(a, yoneda_product(b, c))
        assert left == right


# -- extension sequences ------------------------------------------------------------


def test_extension_seq_validates_exactness():
    from roofext.algebra import ModuleHom
    from roofext.errors import SchemaError

    s1, s2, _ = ka3_simples(QQ)
    e = ka3_first_step(QQ)
    e.validate()
    assert e.sub == s2 and e.quotient == s1 and e.degree == 1
    with pytest.raises(SchemaError, match="not surjective"):
        ExtensionSeq(e.mods, [e.maps[0], ModuleHom.zero(e.mods[1], s1)])
    # injective first map, surjective last map, but the middle is too big
    total, injs, projs = direct_sum([e.mods[1], s2])
    with pytest.raises(SchemaError, match="image is smaller"):
        ExtensionSeq([s2, total, s1], [injs[1], e.maps[1] @ projs[0]])


def test_split_extension_is_trivial():
    k = kx3_simple(QQ)
    amb = kx3_regular(QQ)
    total, injs, projs = direct_sum([k, amb])
    e = ExtensionSeq([k, total, amb], [injs[0], projs[1]])
    assert is_trivial(class_of_extension(e))


def test_class_of_ka3_steps_nonzero():
    for e in (ka3_first_step(F3), ka3_second_step(F3)):
        assert not class_of_extension(e).is_zero()


def test_class_is_lift_independent():
    e = ka3_first_step(QQ)
    base = class_of_extension(e)
    rng = Random(7)
    for _ in range(25):
        assert class_of_extension(e, rng) == base


def test_extension_from_class_roundtrip(rng):
    for field in (F2, F3, QQ):
        e1, _ = random_ses_pair(rng, field)
        a = class_of_extension(e1)
        again = class_of_extension(extension_from_class(a))
        assert again == a
        zero = a.scale(0)
        e0 = extension_from_class(zero)
        assert is_trivial(class_of_extension(e0))


def test_extension_from_class_degree_guard():
    s1, s2, s3 = ka3_simples(QQ)
    _, (a,) = ext_group(s1, s2, 1)
    _, (b,) = ext_group(s2, s3, 1)
    prod = yoneda_product(a, b)
    with pytest.raises(ValueError, match="degree-1"):
        extension_from_class(prod)


# -- splice vs product ----------------------------------------------------------------


def test_splice_matches_product_on_ka3():
    """Nonzero instance, so a sign error cannot hide."""
    e_top = ka3_first_step(QQ)      # 0 -> S2 -> P1 -> S1 -> 0
    e_bot = ka3_second_step(QQ)     # 0 -> S3 -> P2 -> S2 -> 0
    spliced = splice(e_top, e_bot)
    spliced.validate()
    assert spliced.degree == 2
    a = class_of_extension(e_top)
    b = class_of_extension(e_bot)
    prod = yoneda_product(a, b)
    assert not prod.is_zero()
    assert class_of_extension(spliced) == prod.scale(SPLICE_PRODUCT_SIGN)


def test_splice_matches_product_randomized(rng):
    hits = 0
    for trial in range(16):
        field = F2 if trial % 2 else F3
        e1, e2 = random_ses_pair(rng, field)
        spliced = splice(e1, e2)
        prod = yoneda_product(class_of_extension(e1), class_of_extension(e2))
        assert class_of_extension(spliced) == prod.scale(SPLICE_PRODUCT_SIGN)
        hits += 0 if prod.is_zero() else 1
        if hits and trial >= 5:
            break
    assert hits >= 1  # at least one genuinely nonzero comparison


def test_splice_middle_mismatch():
    e = ka3_first_step(QQ)
    with pytest.raises(MiddleMismatchError, match="splice"):
        splice(e, e)
