import besselfd


def test_bessel_values():
    assert abs(besselfd.j0(1.0) - 0.7651976865579666) < 1e-14
    assert abs(besselfd.j1(1.0) - 0.4400505857449335) < 1e-14
    h = besselfd.hankel1_0(1.0)
    assert abs(h.real - 0.7651976865579666) < 1e-14
    assert abs(h.imag - 0.08825696421567696) < 1e-13


def test_grid_and_stencils():
    ns = besselfd.square_grid(0, 0, 1, 1, 20)
    assert len(ns) == 21 * 21
    assert ns.boundary_count() == 80
    st = besselfd.stencils(ns, 9, 9)
    assert len(st) == len(ns)
    assert all(len(s) == 9 for s in st)
    xy = ns.xy()
    for s in st:
        cx, cy = xy[s[0]]
        # every member lies within a couple of spacings of its center
        assert all((xy[i][0] - cx) ** 2 + (xy[i][1] - cy) ** 2 < (3 * ns.h) ** 2 for i in s)


def test_spectrum_and_weights():
    xs = [0.0, 0.1, -0.1, 0.0, 0.0]
    ys = [0.0, 0.0, 0.0, 0.1, -0.1]
    lmax, lmin = besselfd.kernel_spectrum(xs, ys, 5.0)
    assert lmax > lmin > 0
    w = besselfd.derivative_weights("dx", xs, ys, 5.0, beta=1e-12)
    assert len(w) == 5
    # dx row on a symmetric cross is antisymmetric in x and ignores y
    assert abs(w[1] + w[2]) < 1e-6
    assert abs(w[3]) < 1e-6 and abs(w[4]) < 1e-6


def test_solve_reference():
    out = besselfd.solve_reference(k_over_2pi=2, inv_h=16)
    assert out["n_nodes"] == 17 * 17
    assert out["err"] < 5e-3
    assert out["residual"] < 1e-10
