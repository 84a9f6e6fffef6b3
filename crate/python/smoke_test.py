"""Smoke test for the galsym Python module.

Build and install first:  pip install maturin && pip install --no-build-isolation ./crates/python
Then run:                 python python/smoke_test.py
"""

import json

import galsym


def check_groups():
    subgroups = galsym.subgroups_of_gl2_3()
    assert len(subgroups) == 55
    orders = sorted({g.order for g in subgroups})
    assert orders[0] == 1 and orders[-1] == 48

    gl2 = galsym.Group.gl2(3)
    assert gl2.order == 48 and gl2.contains_sl2()
    assert gl2.classify() == ("contains-sl2", None)

    b = galsym.Group.borel(3)
    verdict, witness = b.classify()
    assert verdict == "borel-conjugate" and witness is not None
    assert b.sylow().order == 3

    g = galsym.Group(3, ["1,1,0,1", "2,0,0,1"])
    assert g.order == 6 and g.contains("1,2,0,1")
    for module in galsym.MODULES:
        assert g.sha1_dim(module) == 0
    assert galsym.Group.unipotent(3).h1_dim("trivial") == 1

    for c in gl2.cyclic_subgroups():
        for module in galsym.MODULES:
            assert c.h1_dim(module) == c.cyclic_h1_dim(module)

    try:
        galsym.Group.split_torus(3).classify()
    except galsym.GalsymError:
        pass
    else:
        raise AssertionError("order prime to p must be rejected")

    coh = b.cohomology("sym2")
    assert coh["sha1_dim"] == 0


def check_cohomology_checks():
    report = galsym.inf_res_exactness(galsym.Group.gl2(3), galsym.Group.sl2(3), "ad")
    assert report["exact"]
    for p in (3, 5):
        assert all(galsym.serre_check(p, m)["injective"] for m in galsym.MODULES)


def check_curves():
    e = galsym.Curve.short(1, 1)
    assert e.ap(5) == -3
    assert galsym.Curve.short(0, 1).ap(5) == 0
    c37 = galsym.Curve("37a1", [0, 0, 1, -1, 0])
    assert c37.discriminant == 37
    assert c37.reduction_type(37) == "bad"
    for p in (3, 5, 7, 11, 13):
        assert c37.count_points(p) == c37.count_points_naive(p)
    assert len(e.division_polynomial(5)) == 13
    verdicts = c37.prime_scan(50)
    assert [v["p"] for v in verdicts][:3] == [2, 3, 5]
    corpus = galsym.bundled_corpus()
    assert len(corpus) == 10
    cm = next(c for c in corpus if c.label == "cm-x3-x")
    assert 0.35 <= cm.ordinary_density(500) <= 0.65


def check_certificates():
    e = galsym.Curve.short(1, 1, "x3+x+1")
    cert = e.approximate(5, seed=3)
    assert cert["verified"] and cert["depth"] <= 16
    assert galsym.check_certificate(cert)
    assert galsym.check_certificate(json.dumps(cert))
    cert["x"] = "123456789/1"
    assert not galsym.check_certificate(cert)


def check_reports():
    report = galsym.sha_scan(3, scope="all")
    assert report["schema"] == 1 and report["passed"]
    assert report["summary"]["groups"] == 55
    assert galsym.verify(report)["passed"]

    approx = galsym.approximate("43a1", 3, pair=True)
    assert approx["passed"] and len(approx["records"]) == 2
    assert galsym.verify(json.dumps(approx))["passed"]

    scan = galsym.prime_scan(100)
    assert scan["passed"]


if __name__ == "__main__":
    for check in (check_groups, check_cohomology_checks, check_curves, check_certificates, check_reports):
        check()
        print(f"ok  {check.__name__}")
    print("python smoke test passed")
