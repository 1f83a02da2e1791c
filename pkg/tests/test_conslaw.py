import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnsym import conslaw as cl
from dnsym import jetspace as js
from dnsym.symexpr import Verdict, is_zero, jet, normalize, parse_expr, var

P = parse_expr
z1, z2 = var("z1"), var("z2")
w02, w12 = P("w[0,2]"), P("w[1,2]")
q = lambda k, l: jet("q", k, l)  # noqa: E731


def vanishes(e) -> bool:
    return is_zero(e).verdict.holds


class TestIntegrals:
    @pytest.mark.parametrize("text", ["w[1,1] + w[0,2]^2/2", "zeta[1,0]", "zeta[2,3]*zeta[1,1]"])
    def test_integrals(self, text):
        assert cl.verify_integral(text).verdict.holds

    def test_second_derivative_not_integral(self):
        assert cl.verify_integral("w[0,2]").verdict is Verdict.NONZERO
        assert normalize(cl.D2(w02) + w12 / w02) == 0

    @pytest.mark.parametrize("k", range(4))
    def test_theta_first_order(self, k):
        t = js.theta(k)
        assert normalize(js.to_integral_chart(cl.D1(t) + w02 * cl.D2(t))) == 0


class TestDeterminingConditions:
    def test_shift_characteristic(self):
        assert cl.verify_gen_sym_char("w[1,0]").verdict.holds

    def test_slot_family(self):
        assert cl.verify_gen_sym_char("z2*zeta[1,0]").verdict.holds

    def test_potential_not_symmetry(self):
        assert cl.verify_gen_sym_char("w[0,0]").verdict is Verdict.NONZERO

    def test_theta_cosymmetry(self):
        assert cl.verify_cosymmetry("theta[0]").verdict.holds

    def test_cosymmetry_member(self):
        assert cl.verify_cosymmetry("w[0,1] - z1*w[0,2]^2/2").verdict.holds

    def test_z2_not_cosymmetry(self):
        assert cl.verify_cosymmetry("z2").verdict is Verdict.NONZERO


class TestCurrents:
    def test_integral_current(self):
        assert cl.verify_conserved_current(0, "zeta[1,0]").verdict.holds

    def test_rho_current(self):
        assert cl.verify_conserved_current(w12, w12 * w02).verdict.holds

    @pytest.mark.parametrize("label", ["explicit-1", "explicit-2"])
    def test_explicit_currents(self, label):
        (build,) = [b for name, b, _, _ in cl.current_family() if name == label]
        F1, F2 = build(None)
        assert cl.verify_conserved_current(F1, F2).verdict.holds


class TestCharacteristics:
    def test_integral_current_has_unit_characteristic(self):
        assert vanishes(cl.characteristic_of(0, "zeta[1,0]") - 1)
        assert cl.verify_characteristic_pairing(1, (0, "zeta[1,0]")).verdict.holds

    def test_total_divergence_has_zero_characteristic(self):
        assert vanishes(cl.characteristic_of(0, "zeta[1,1]"))

    def test_explicit_pairs_match_on_the_diagonal(self):
        fam = {name: (b(None), ch(None)) for name, b, _, ch in cl.current_family() if name.startswith("explicit")}
        (F3, ch3), (F4, ch4) = fam["explicit-1"], fam["explicit-2"]
        assert cl.verify_characteristic_pairing(ch3, F3).verdict.holds
        assert cl.verify_characteristic_pairing(ch4, F4).verdict.holds
        assert cl.verify_characteristic_pairing(ch4, F3).verdict is Verdict.NONZERO

    def test_euler_identity_for_integral_current(self):
        assert cl.euler_pairing_identity(1, (0, "zeta[1,0]")) == 0

    def test_printed_rho_form_fails_for_even_power(self):
        # rho = theta0 theta1 gives a trivial current: (D2 G, -D1 G) with G = theta0^2/2
        rho = P("theta[0]*theta[1]")
        F = (w12 / w02 * rho, w12 * rho)
        assert cl.verify_characteristic_pairing(cl.char_of_rho_euler(rho), F).verdict.holds
        assert vanishes(cl.char_of_rho_euler(rho))
        assert vanishes(cl.char_of_rho(rho) + 2 * P("theta[1]"))

    @settings(max_examples=6, deadline=None)
    @given(st.sampled_from(["theta[1]", "w[0,2]*theta[1]", "theta[1]^2*w[0,2]", "exp(theta[1])*w[0,2]"]))
    def test_forms_agree_for_odd_slots(self, text):
        rho = P(text)
        assert vanishes(js.to_integral_chart(cl._prep(cl.char_of_rho(rho) - cl.char_of_rho_euler(rho), js.REDUCED)))

    def test_integral_characteristic_of_slot(self):
        alpha = P("z1*zeta[1,0]^2")
        assert cl.verify_characteristic_pairing(cl.char_of_integral(alpha), (0, alpha)).verdict.holds


class TestEuler:
    def test_corrected_lagrangian(self):
        e = cl.euler_operator(cl.CORRECTED_LAGRANGIAN)
        assert normalize(e - (q(1, 1) + q(0, 1) * q(0, 2))) == 0

    def test_total_derivative(self):
        assert cl.euler_operator("q[1,0]") == 0

    def test_quadratic(self):
        assert normalize(cl.euler_operator("q[0,1]^2/2") + q(0, 2)) == 0

    def test_printed_lagrangian(self):
        assert normalize(cl.euler_operator(cl.PRINTED_LAGRANGIAN) - (q(1, 1) + q(0, 2))) == 0

    @settings(max_examples=10, deadline=None)
    @given(st.sampled_from(["q[0,0]*q[0,1]", "z1*q[1,0]", "sin(q[0,0])*q[0,1]", "q[1,0]*q[0,2] - q[1,1]*q[0,1]"]))
    def test_divergences_are_annihilated(self, text):
        g = P(text)
        assert vanishes(cl.euler_operator(js.total_derivative(g, 1, "intermediate")))


class TestTriviality:
    def test_template_with_theta_and_integral(self):
        res = cl.trivial_current_check(cl.trivial_template("theta[0]", "zeta[1,0]", (0, 0, 0)))
        assert res.trivial and res.template is not None

    def test_integral_current_not_trivial(self):
        res = cl.trivial_current_check((0, "zeta[1,0]"))
        assert not res.trivial and vanishes(res.characteristic - 1)

    def test_zero_current(self):
        assert cl.trivial_current_check((0, 0)).trivial

    @pytest.mark.parametrize("c", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    def test_corrected_constants_trivial(self, c):
        assert cl.trivial_current_check(cl.trivial_template(0, 0, c, form="corrected")).trivial

    def test_printed_constant_term_characteristic(self):
        F = cl.trivial_template(0, 0, (1, 0, 0), form="printed")
        assert vanishes(cl.characteristic_of(*F) - (1 - w02))

    def test_intermediate_printed_constant_term(self):
        F = cl.trivial_template(0, 0, (1,), "intermediate", form="printed")
        assert vanishes(cl.characteristic_of(*F, "intermediate") - (1 - q(0, 1)))
        G = cl.trivial_template(0, 0, (1,), "intermediate", form="corrected")
        assert vanishes(cl.characteristic_of(*G, "intermediate"))


class TestInducedMap:
    def test_shift(self):
        assert vanishes(cl.induced_char_map("w[1,0]") + cl.H)

    def test_integral_kernel(self):
        assert cl.induced_char_map("zeta[1,0]*zeta[2,0]") == 0

    @pytest.mark.parametrize("label", [name for name, _, _ in cl.gen_sym_family()])
    def test_table(self, label):
        (build, kind) = [(b, k) for name, b, k in cl.gen_sym_family() if name == label][0]
        expected = cl.induced_table()[label]
        s = cl.slot_samples(kind, with_opaque=False)[0][1] if kind else None
        assert vanishes(cl.induced_char_map(build(s)) - expected(s))


def test_catalog_listing():
    rows = cl.describe_catalog()
    assert {r["family"] for r in rows} == {"generalized-symmetry", "cosymmetry", "conserved-current", "trivial-current"}
