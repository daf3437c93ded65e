"""The cone, its involution, branch degenerations, and the conic pencil."""

import random
from fractions import Fraction

import pytest

from godeaux.cone import (
    BranchConfig,
    ConeSetup,
    DEGENERATION_CASES,
    STANDARD_FRAME,
    classify_degeneration,
    cone_setup,
    default_branch_config,
    degeneration_report,
    image_equations,
    image_ring,
    intersection_count,
    pencil_of_conics,
    pencil_report,
    tau_fixed_points,
    verify_invariant_map,
)
from godeaux.scalars import field_from_spec
from godeaux.wpoly import MonomialMap, WRing, apply_map, parse_poly


def test_setup_involution_squares_to_identity():
    s = cone_setup()
    sq = [x * x for x in s.tau.scalars]
    assert sq == [s.field(1)] * 4
    assert apply_map(s.cone, s.tau) == s.cone


def test_setup_over_prime_field():
    s = cone_setup(13)
    assert s.field.characteristic == 13
    assert len(s.invariant_quadrics) == 5


def test_setup_rejects_wrong_cone():
    s = cone_setup()
    bad = parse_poly(s.ring, "y0^2 + y1 y2")
    with pytest.raises(ValueError, match="multiple of y0"):
        ConeSetup(ring=s.ring, cone=bad, tau=s.tau,
                  invariant_quadrics=s.invariant_quadrics)


def test_setup_rejects_non_involution():
    s = cone_setup()
    tau = MonomialMap.diagonal(s.ring, [s.field(x) for x in (2, -1, -1, 1)])
    with pytest.raises(ValueError, match="diagonal involution"):
        ConeSetup(ring=s.ring, cone=s.cone, tau=tau,
                  invariant_quadrics=s.invariant_quadrics)


def test_setup_rejects_sign_pattern_breaking_cone():
    s = cone_setup()
    tau = MonomialMap.diagonal(s.ring, [s.field(x) for x in (1, 1, -1, 1)])
    with pytest.raises(ValueError, match="does not preserve"):
        ConeSetup(ring=s.ring, cone=s.cone, tau=tau,
                  invariant_quadrics=s.invariant_quadrics)


def test_setup_rejects_incomplete_quadric_basis():
    s = cone_setup()
    with pytest.raises(ValueError, match="basis of the even quadrics"):
        ConeSetup(ring=s.ring, cone=s.cone, tau=s.tau,
                  invariant_quadrics=s.invariant_quadrics[:4])


def test_reduce_rewrites_even_powers():
    s = cone_setup()
    f = parse_poly(s.ring, "y0^4")
    assert s.reduce(f) == parse_poly(s.ring, "y1^2 y2^2")
    assert s.reduce(s.cone).is_zero()
    mixed = parse_poly(s.ring, "y0^3 y3 + y0 y1")
    assert s.reduce(mixed) == parse_poly(s.ring, "y0 y1 y2 y3 + y0 y1")


def test_invariant_map_symbolic_and_mod_13():
    rep = verify_invariant_map(cone_setup(), prime=13)
    assert rep.ok
    assert all(rep.data["checks"].values())
    assert rep.data["cone_points"] == 13 * 13 + 13 + 1


def test_invariant_map_over_other_prime():
    rep = verify_invariant_map(cone_setup(29), prime=29)
    assert rep.ok
    assert rep.data["cone_points"] == 29 * 29 + 29 + 1


def test_image_model_is_two_equations():
    ring = image_ring()
    e1, e2 = image_equations(ring)
    assert e1.degree() == 2 and e2.degree() == 2


def test_fixed_points_symbolic():
    rep = tau_fixed_points(cone_setup())
    assert rep.ok
    assert rep.data["points"] == [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]
    assert rep.data["vertex"] == [0, 0, 0, 1]


def test_fixed_points_images_are_coordinate_points():
    rep = tau_fixed_points(cone_setup())
    images = rep.data["images"]
    assert images["[0, 0, 0, 1]"] == [0, 0, 0, 1, 0]
    assert images["[0, 1, 0, 0]"] == [0, 1, 0, 0, 0]
    assert images["[0, 0, 1, 0]"] == [0, 0, 1, 0, 0]


def test_fixed_points_enumeration_cross_check():
    rep = tau_fixed_points(cone_setup(), prime=13)
    assert rep.ok
    assert rep.data["checks"]["enumeration_agrees"]
    assert rep.points_scanned is not None


def test_default_configs_validate_and_derive_B2():
    for case in DEGENERATION_CASES:
        cfg = default_branch_config(case)
        setup = cfg.setup
        assert cfg.q2 == apply_map(cfg.q1, setup.tau)
        assert cfg.h3.degree() == 1


def test_default_configs_over_gf13():
    for case in DEGENERATION_CASES:
        cfg = default_branch_config(case, 13)
        assert cfg.q1.ring.field.characteristic == 13


def test_config_rejects_unknown_case():
    with pytest.raises(ValueError, match="not one of"):
        default_branch_config("deg5")


def test_config_rejects_plane_missing_fixed_points():
    s = cone_setup()
    with pytest.raises(ValueError, match="must vanish at both smooth fixed points"):
        BranchConfig(case="general",
                     q1=parse_poly(s.ring, "y1^2 + y3^2"),
                     h3=parse_poly(s.ring, "y0 + y1"))


def test_config_rejects_cone_multiple():
    s = cone_setup()
    with pytest.raises(ValueError, match="multiple of the cone"):
        BranchConfig(case="general",
                     q1=parse_poly(s.ring, "y0^2 + -1*y1 y2"),
                     h3=parse_poly(s.ring, "y0"))


def test_config_rejects_non_quadric():
    s = cone_setup()
    with pytest.raises(ValueError, match="must be a quadric"):
        BranchConfig(case="general", q1=parse_poly(s.ring, "y0"),
                     h3=parse_poly(s.ring, "y0"))


def test_deg1_requires_singular_point_data():
    s = cone_setup()
    q1 = parse_poly(s.ring, "y1^2 + y3^2")
    with pytest.raises(ValueError, match="needs the node location"):
        BranchConfig(case="deg1", q1=q1, h3=parse_poly(s.ring, "y0"))
    with pytest.raises(ValueError, match="must not be fixed"):
        BranchConfig(case="deg1", q1=q1, h3=parse_poly(s.ring, "y0"),
                     r1=(0, 0, 0, 1))
    with pytest.raises(ValueError, match="does not lie on the cone"):
        BranchConfig(case="deg1", q1=q1, h3=parse_poly(s.ring, "y0"),
                     r1=(1, 1, 2, 0))
    with pytest.raises(ValueError, match="does not vanish"):
        BranchConfig(case="deg1", q1=q1, h3=parse_poly(s.ring, "y0"),
                     r1=(1, 1, 1, 0))


def test_deg1_rejects_smooth_branch_point():
    s = cone_setup()
    # vanishes at (1,1,1,0) and its image but with full-rank Jacobian there
    q1 = parse_poly(s.ring, "y0 y3 + y1^2 + -1*y1 y2")
    with pytest.raises(ValueError, match="not singular"):
        BranchConfig(case="deg1", q1=q1, h3=parse_poly(s.ring, "y0"),
                     r1=(1, 1, 1, 0))


def test_deg2_requires_perfect_square():
    s = cone_setup()
    with pytest.raises(ValueError, match="q1 = h\\^2"):
        BranchConfig(case="deg2", q1=parse_poly(s.ring, "y1^2 + y3^2"),
                     h3=parse_poly(s.ring, "y0"),
                     h=parse_poly(s.ring, "y1 + y3"))


def test_deg3_requires_invariant_plane_off_vertex():
    s = cone_setup()
    h1 = parse_poly(s.ring, "y0 + y1 + y3")
    bad = parse_poly(s.ring, "y0 + y1")
    with pytest.raises(ValueError, match="invariant plane"):
        BranchConfig(case="deg3", q1=bad * h1, h3=parse_poly(s.ring, "y0"),
                     h0=bad, h1=h1)
    through_vertex = parse_poly(s.ring, "y0")
    with pytest.raises(ValueError, match="vertex"):
        BranchConfig(case="deg3", q1=through_vertex * h1,
                     h3=parse_poly(s.ring, "y0"),
                     h0=through_vertex, h1=h1)


def test_deg4_requires_tangent_plane():
    s = cone_setup()
    h1 = parse_poly(s.ring, "y0 + y1 + y2 + y3")
    not_tangent = parse_poly(s.ring, "y1 + y2")
    with pytest.raises(ValueError, match="doubled ruling"):
        BranchConfig(case="deg4", q1=h1 * not_tangent,
                     h3=parse_poly(s.ring, "y0"), h1=h1, ht=not_tangent)


def test_intersection_lattice_count_is_frame_independent():
    for case in DEGENERATION_CASES:
        cfg = default_branch_config(case)
        rep = intersection_count(cfg)
        assert rep.data["lattice_count"] == 8


def test_intersection_general_census():
    rep = intersection_count(default_branch_config("general"))
    assert rep.ok
    assert rep.data["rational_count"] <= 8


def test_intersection_deg1_multiplicity_census():
    rep = intersection_count(default_branch_config("deg1"))
    assert rep.ok
    assert rep.data["rational_count"] == 2
    assert rep.data["multiplicities"] == {
        "[1, 1, 1, 0]": 4,
        "[1, -1, -1, 0]": 4,
    }


def test_intersection_rejects_equal_branches():
    s = cone_setup()
    cfg = BranchConfig(case="general",
                       q1=parse_poly(s.ring, "y1^2 + y2^2 + y3^2"),
                       h3=parse_poly(s.ring, "y0 + 2*y3"))
    rep = intersection_count(cfg)
    assert rep.status == "error"
    assert "shared component" in rep.witness["reason"]


def test_intersection_detects_shared_plane_in_deg3():
    rep = intersection_count(default_branch_config("deg3"))
    assert rep.status == "error"
    assert "shared component" in rep.witness["reason"]


EXPECTED_VERDICTS = {
    "general": ("smooth-Godeaux", True, 1, 1),
    "deg1": ("N-elliptic", True, 1, 1),
    "deg2": ("P2", True, 1, 1),
    "deg3": ("Enriques-4-nodes", False, 2, 2),
    "deg4": ("dP1", False, None, 2),
    "exP": ("P2", True, 1, 1),
}


def test_classification_table():
    for case, row in EXPECTED_VERDICTS.items():
        v = classify_degeneration(default_branch_config(case))
        assert v.normalization == row[0], case
        assert v.gorenstein is row[1], case
        assert v.cartier_index_T == row[2], case
        assert v.cartier_index_S == row[3], case


def test_gorenstein_gate_passes_for_general_and_fails_for_deg4():
    ok = classify_degeneration(default_branch_config("general"))
    assert ok.gates["vertex_avoids_branch"]
    assert ok.gates["triple_intersection_empty"]
    assert ok.gates["fixed_points_avoid_B1B2"]
    bad = classify_degeneration(default_branch_config("deg4"))
    assert not bad.gates["vertex_avoids_branch"]
    assert not bad.gates["fixed_points_avoid_B1B2"]


def test_deg3_gates_show_the_obstruction():
    v = classify_degeneration(default_branch_config("deg3"))
    assert not v.gates["triple_intersection_empty"]
    assert not v.gates["fixed_points_avoid_B1B2"]
    assert v.gates["vertex_avoids_branch"]


def test_general_config_through_vertex_downgrades_gorenstein():
    s = cone_setup()
    cfg = BranchConfig(case="general",
                       q1=parse_poly(s.ring, "y1^2 + y2^2 + y0 y1"),
                       h3=parse_poly(s.ring, "y0 + 2*y3"))
    v = classify_degeneration(cfg)
    assert not v.gates["vertex_avoids_branch"]
    assert v.gorenstein is None
    assert degeneration_report(v).status == "fail"


def test_degeneration_reports_are_lookups():
    for case in DEGENERATION_CASES:
        v = classify_degeneration(default_branch_config(case))
        rep = degeneration_report(v)
        assert rep.status == "lookup", case
        assert rep.data["normalization"] == v.normalization


def test_verdicts_invariant_under_branch_swap():
    for case in DEGENERATION_CASES:
        cfg = default_branch_config(case)
        assert classify_degeneration(cfg) == classify_degeneration(
            cfg.tau_conjugate()
        )


def test_conjugation_is_involutive():
    for case in DEGENERATION_CASES:
        cfg = default_branch_config(case)
        back = cfg.tau_conjugate().tau_conjugate()
        assert back.q1 == cfg.q1
        assert back.r1 == cfg.r1


def test_standard_frame_matrix():
    res = pencil_of_conics()
    assert res.phi == (
        (Fraction(0), Fraction(0), Fraction(1)),
        (Fraction(-1), Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(-1), Fraction(1)),
    )
    assert res.cycles_points
    assert res.phi4_is_identity


def test_standard_frame_fixed_members():
    res = pencil_of_conics()
    assert res.fixed_members[0] != res.fixed_members[1]
    assert res.reducible_is_diagonal_lines
    # y * (x - z), normalized to leading coefficient 1
    ring = res.reducible_member.ring
    assert res.reducible_member == parse_poly(ring, "x y + -1*y z")


def test_standard_frame_gluing_is_free():
    res = pencil_of_conics()
    assert len(res.gluing_orbits) == 4
    covered = {pt for orbit in res.gluing_orbits for pt in orbit}
    assert len(covered) == 8
    assert res.iota_free


def test_pencil_rejects_collinear_points():
    with pytest.raises(ValueError, match="degenerate position"):
        pencil_of_conics([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
    with pytest.raises(ValueError, match="degenerate position"):
        pencil_of_conics([(1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_pencil_report_passes():
    rep = pencil_report()
    assert rep.ok
    assert all(rep.data["checks"].values())


def test_pencil_properties_on_random_frames():
    rng = random.Random(20260819)
    field = field_from_spec("Q")
    done = 0
    while done < 100:
        pts = [tuple(rng.randrange(-4, 5) for _ in range(3)) for _ in range(4)]
        try:
            res = pencil_of_conics(pts)
        except ValueError:
            continue
        assert res.cycles_points
        assert res.phi4_is_identity
        assert res.fixed_members[0] != res.fixed_members[1]
        for member in res.fixed_members:
            for pt in pts:
                assert member.evaluate([field(x) for x in pt]) == field(0)
        assert res.iota_free
        done += 1


def test_pencil_base_points_on_both_basis_conics():
    res = pencil_of_conics()
    field = res.pencil_basis[0].ring.field
    for q in res.pencil_basis:
        for pt in STANDARD_FRAME:
            assert q.evaluate([field(x) for x in pt]) == field(0)
