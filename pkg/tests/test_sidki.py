import pytest

from weakcomm import sidki
from weakcomm.errors import ArgumentError
from weakcomm.permgroups import commutator
from weakcomm.presentations import parse_presentation
from weakcomm.words import bar_word

from .conftest import NILPOTENT_SUITE, SUITE_ORDERS


def test_build_c2_exact_orders(realizations):
    x = realizations["C2"]
    assert x.orders() == {"G": 2, "X": 4, "D": 1, "L": 2, "W": 1, "DL": 2,
                          "im_rho": 4}
    assert x.X.is_abelian()


def test_all_suite_checks_pass(realizations):
    for name, x in realizations.items():
        assert x.failed_checks() == [], name
        assert x.G.order() == SUITE_ORDERS[name]


def test_order_product_identity(realizations):
    for name, x in realizations.items():
        o = x.orders()
        assert o["X"] == o["W"] * o["im_rho"], name


def test_s3_image_of_rho(realizations):
    x = realizations["S3"]
    assert x.im_rho.order() == 108
    assert x.G.order() ** 3 // x.im_rho.order() == 2 == x.Q.order()
    assert sidki.check_im_rho(x)


def test_c2xc2_recorded_values(realizations):
    x = realizations["C2xC2"]
    o = x.orders()
    assert o["W"] == 2 and o["X"] == 32 and o["im_rho"] == 16


def test_generator_commutators_suffice_for_d(realizations):
    """The normal closure of generator-pair commutators equals the subgroup
    generated by all element-pair commutators [g, bar h]."""
    for name in ("C2xC2", "S3"):
        x = realizations[name]
        all_pairs = []
        for wg in x.G_words:
            for wh in x.G_words:
                u = x.table.word_image(x.double, wg)
                v = x.table.word_image(x.double, bar_word(wh))
                all_pairs.append(commutator(u, v))
        full = x.X.subgroup(all_pairs)
        assert full.order() == x.D.order(), name


def test_ell_identity_exhaustive(realizations):
    assert sidki.ell_identity_check(realizations["C2xC2"])
    assert sidki.ell_identity_check(realizations["S3"])


def test_w_central_and_l_not_normally_bigger(realizations):
    for name, x in realizations.items():
        w_elems = list(x.W.elements())
        for w in w_elems:
            for g in x.DL.generators:
                assert w * g == g * w, name


def test_nilpotence_reports(realizations):
    assert sidki.nilpotence_report(realizations["C2"]) == \
        {"class_G": 1, "class_X": 1}
    rep = sidki.nilpotence_report(realizations["Q8"])
    assert rep["class_G"] == 2 and rep["class_X"] is not None
    rep = sidki.nilpotence_report(realizations["S3"])
    assert rep["class_G"] is None       # no assertion made about the double


def test_hom_order_identities(realizations):
    for name in ("C2xC2", "Q8"):
        x = realizations[name]
        assert x.rho.kernel().order() * x.rho.image().order() == x.X.order()
        assert x.pi.kernel().order() * x.pi.image().order() == x.X.order()


def test_engel_certificate_abelian(realizations):
    cert = sidki.engel_certificate(realizations["C2"])
    assert cert["n"] == 1 and cert["d"] == 1
    assert cert["m"] == cert["s"] + 5
    assert cert["verdict"] is True


@pytest.mark.parametrize("name", ["Q8", "D4"])
def test_engel_certificate_two_generated(realizations, name):
    cert = sidki.engel_certificate(realizations[name])
    assert cert["n"] == 2 and cert["d"] == 2
    assert cert["m"] == 2 + 2 + cert["s"] + 3
    assert cert["verdict"] is True
    assert cert["minimal_engel_class_of_double"] <= cert["m"]


def test_engel_certificate_rejects_non_engel(realizations):
    with pytest.raises(ArgumentError):
        sidki.engel_certificate(realizations["S3"])


def test_build_rejects_barred_base():
    with pytest.raises(ArgumentError):
        sidki.build(parse_presentation("< a, a~ | >"))


def test_verification_report_shape(realizations):
    rep = sidki.verification_report(realizations["C4"], include_engel=True)
    assert rep["orders"]["X"] == 16
    assert all(c["pass"] for c in rep["checks"])
    assert rep["engel"]["verdict"] is True
    assert set(rep["engel"]) >= {"n", "d", "s", "m", "verdict"}
