import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracground.errors import DomainError, GridMismatchError
from fracground.spectral import (
    Field,
    GridSpec,
    apply_symbol,
    delta,
    dilate,
    dirichlet_energy,
    hsc_norm,
    inner,
    is_even,
    kernel,
    kernel_properties,
    lp_norm,
    lp_power,
    quadrature,
    resolvent,
    spectral_l2_norm,
    spectrum,
)

from helpers import benjamin

SMALL = GridSpec(20.0, 64)


def dft_symbol_oracle(values, L, symbol):
    """Apply a Fourier multiplier by explicit sums over k = -N/2..N/2-1."""
    n = values.size
    m = np.arange(n)
    k = np.arange(-n // 2, n // 2)
    phase = np.exp(-2j * np.pi * np.outer(k, m) / n)
    coef = phase @ values / n
    xi = np.pi * k / L
    mult = symbol(np.abs(xi))
    mult[0] = symbol(np.abs(xi[:1]))[0]
    return np.real(np.conj(phase).T @ (coef * mult))


def random_values(seed, grid=SMALL):
    rng = np.random.default_rng(seed)
    x = grid.x
    v = np.zeros(grid.N)
    for _ in range(3):
        v += rng.normal() * np.exp(-((x - rng.uniform(-5, 5)) / rng.uniform(1, 3)) ** 2)
    return v


# -- grid and field -------------------------------------------------------------------

def test_grid_nodes():
    g = GridSpec(10.0, 16)
    assert g.h * g.N == pytest.approx(2 * g.L, rel=0, abs=1e-15)
    assert g.x[g.center] == 0.0
    assert g.x[0] == -10.0
    assert np.allclose(np.diff(g.x), g.h)


@pytest.mark.parametrize("L,N", [(0.0, 16), (-1.0, 16), (1.0, 7), (1.0, 6), (1.0, 15.5)])
def test_grid_rejects(L, N):
    with pytest.raises(DomainError):
        GridSpec(L, N)


def test_grid_json_roundtrip():
    g = GridSpec(12.5, 256)
    import json

    assert GridSpec.from_dict(json.loads(g.to_json())) == g


def test_field_is_immutable():
    u = Field(SMALL, np.ones(SMALL.N))
    with pytest.raises(AttributeError):
        u.values = np.zeros(SMALL.N)
    with pytest.raises(ValueError):
        u.values[0] = 3.0


def test_field_rejects_nonfinite_and_wrong_length():
    bad = np.ones(SMALL.N)
    bad[3] = np.nan
    with pytest.raises(DomainError):
        Field(SMALL, bad)
    with pytest.raises(DomainError):
        Field(SMALL, np.ones(SMALL.N + 2))


def test_grid_mismatch():
    a = Field(SMALL, np.ones(SMALL.N))
    b = Field(GridSpec(20.0, 128), np.ones(128))
    with pytest.raises(GridMismatchError):
        a + b
    with pytest.raises(GridMismatchError):
        inner(a, b)


def test_spectrum_conjugate_symmetry():
    u = Field(SMALL, random_values(1))
    s = spectrum(u)
    for k in range(1, SMALL.N // 2):
        assert s.coeff(-k) == pytest.approx(np.conj(s.coeff(k)), abs=1e-14)
    assert s.wavenumbers[SMALL.N // 2] == 0.0


# -- symbol, resolvent ------------------------------------------------------------------

@pytest.mark.parametrize("sigma", [0.3, 0.5, 1.0, 1.7, 2.0])
def test_symbol_matches_explicit_sums(sigma):
    v = random_values(7)
    got = apply_symbol(Field(SMALL, v), sigma).values
    want = dft_symbol_oracle(v, SMALL.L, lambda a: a**sigma)
    assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))


@pytest.mark.parametrize("sigma,nu", [(0.5, 0.3), (1.0, 1.0), (1.5, 4.0)])
def test_resolvent_matches_explicit_sums(sigma, nu):
    v = random_values(8)
    got = resolvent(Field(SMALL, v), sigma, nu).values
    want = dft_symbol_oracle(v, SMALL.L, lambda a: 1.0 / (a**sigma + nu))
    assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))


def test_cosine_is_eigenfunction():
    g = GridSpec(7.0, 64)
    u = Field.from_function(g, lambda x: np.cos(np.pi * x / g.L))
    out = apply_symbol(u, 0.5)
    assert np.allclose(out.values, (np.pi / g.L) ** 0.5 * u.values, atol=1e-14)
    r = resolvent(u, 1.0, 1.0)
    assert np.allclose(r.values, u.values / (np.pi / g.L + 1), atol=1e-14)


@pytest.mark.parametrize("sigma", [0.4, 1.0, 1.9])
def test_constant_is_annihilated(sigma):
    one = Field(SMALL, np.ones(SMALL.N))
    assert np.max(np.abs(apply_symbol(one, sigma).values)) < 1e-14
    assert np.allclose(resolvent(one, sigma, 2.0).values, 0.5, atol=1e-15)


def test_benjamin_soliton_satisfies_equation():
    g = GridSpec(200.0, 2**14)
    u = Field.from_function(g, benjamin)
    lhs = apply_symbol(u, 1.0).values
    rhs = u.values**2 - u.values
    assert np.max(np.abs(lhs - rhs)) <= 1e-4


def test_resolvent_inverts_operator():
    u = Field(SMALL, random_values(3))
    for sigma, nu in [(0.5, 0.1), (1.0, 1.0), (1.8, 3.0)]:
        back = resolvent(apply_symbol(u, sigma) + nu * u, sigma, nu)
        assert np.max(np.abs(back.values - u.values)) <= 1e-13


@pytest.mark.parametrize("nu", [0.0, -1.0])
def test_resolvent_rejects_nonpositive_shift(nu):
    with pytest.raises(DomainError):
        resolvent(Field(SMALL, np.ones(SMALL.N)), 1.0, nu)


@pytest.mark.parametrize("sigma", [0.0, 2.5, -1.0])
def test_symbol_rejects_sigma(sigma):
    with pytest.raises(DomainError):
        apply_symbol(Field(SMALL, np.ones(SMALL.N)), sigma)


# -- properties --------------------------------------------------------------------------

seeds = st.integers(0, 10**6)
sigmas = st.floats(0.1, 2.0)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds, st.floats(-3, 3), st.floats(-3, 3), sigmas)
def test_linearity(s1, s2, a, b, sigma):
    u, v = Field(SMALL, random_values(s1)), Field(SMALL, random_values(s2))
    lhs = apply_symbol(a * u + b * v, sigma).values
    rhs = (a * apply_symbol(u, sigma) + b * apply_symbol(v, sigma)).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(lhs)), 1.0)


@settings(max_examples=25, deadline=None)
@given(seeds, sigmas)
def test_parity_preserved(seed, sigma):
    u = Field(SMALL, random_values(seed)).symmetrize()
    assert is_even(u)
    assert is_even(apply_symbol(u, sigma), rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds, sigmas)
def test_self_adjoint(s1, s2, sigma):
    u, v = Field(SMALL, random_values(s1)), Field(SMALL, random_values(s2))
    a = quadrature(apply_symbol(u, sigma) * v)
    b = quadrature(u * apply_symbol(v, sigma))
    assert abs(a - b) <= 1e-10 * max(abs(a), abs(b), 1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, sigmas)
def test_symbol_semigroup(seed, sigma):
    u = Field(SMALL, random_values(seed))
    twice = apply_symbol(apply_symbol(u, sigma / 2), sigma / 2).values
    once = apply_symbol(u, sigma).values
    assert np.max(np.abs(twice - once)) <= 1e-10 * np.max(np.abs(once))


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_plancherel(seed):
    u = Field(SMALL, random_values(seed))
    assert lp_norm(u, 2) == pytest.approx(spectral_l2_norm(u), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, sigmas)
def test_dirichlet_energy_matches_half_symbol(seed, sigma):
    u = Field(SMALL, random_values(seed))
    half = apply_symbol(u, sigma / 2)
    assert dirichlet_energy(u, sigma) == pytest.approx(lp_power(half, 2), rel=1e-10, abs=1e-14)
    assert dirichlet_energy(u, sigma) == pytest.approx(quadrature(apply_symbol(u, sigma) * u),
                                                       rel=1e-10, abs=1e-14)


# -- norms ---------------------------------------------------------------------------------

def test_norms_of_zero():
    z = Field.zeros(SMALL)
    assert quadrature(z) == 0 and lp_norm(z, 3) == 0 and hsc_norm(z, 1.0, 1.0) == 0


def test_lp_norm_rejects_small_exponent():
    with pytest.raises(DomainError):
        lp_norm(Field(SMALL, np.ones(SMALL.N)), 0.5)


def test_benjamin_l2_mass():
    u = Field.from_function(GridSpec(400.0, 2**15), benjamin)
    assert lp_norm(u, 2) ** 2 == pytest.approx(2 * np.pi, abs=1e-3)


def test_hsc_norm_definition():
    u = Field(SMALL, random_values(4))
    want = np.sqrt(lp_power(apply_symbol(u, 0.35), 2) + 2.5 * lp_power(u, 2))
    assert hsc_norm(u, 0.7, 2.5) == pytest.approx(want, rel=1e-12)


# -- kernel ----------------------------------------------------------------------------------

def test_kernel_quadrature_benchmark():
    k = kernel(1.0, 1.0, GridSpec(400.0, 2**15))
    assert quadrature(k) == pytest.approx(1.0, abs=1e-6)


def test_kernel_evenness_index_form():
    g = GridSpec(50.0, 512)
    v = kernel(0.7, 1.3, g).values
    m = np.arange(1, g.N)
    assert np.allclose(v[m], v[g.N - m], rtol=0, atol=1e-14 * v.max())


@pytest.mark.parametrize("sigma,nu", [(0.5, 2.0), (1.0, 0.5), (1.5, 3.0), (0.8, 0.25)])
def test_kernel_nu_scaling(sigma, nu):
    # on the grid with L' = nu^{1/sigma} L the nodes are exactly nu^{1/sigma} x_m
    g = GridSpec(100.0, 4096)
    scale = nu ** (1 / sigma)
    scaled = kernel(sigma, 1.0, GridSpec(g.L * scale, g.N)).values
    direct = kernel(sigma, nu, g).values
    bulk = np.abs(g.x) < 0.5 * g.L
    rel = np.abs(direct - nu ** (1 / sigma - 1) * scaled)[bulk] / np.abs(direct[bulk])
    assert rel.max() <= 1e-4


def test_kernel_rejects_sigma_two():
    with pytest.raises(DomainError):
        kernel(2.0, 1.0, SMALL)


def test_delta_has_unit_mass():
    assert quadrature(delta(SMALL)) == pytest.approx(1.0)


def test_kernel_ripple_is_sawtooth():
    # plain node-by-node decay fails only through a (-1)^m ripple far out
    props = kernel_properties(kernel(1.0, 1.0, GridSpec(400.0, 2**15)))
    assert props["decreasing"] and not props["decreasing_all_nodes"]


# -- dilation ----------------------------------------------------------------------------------

@pytest.mark.parametrize("factor", [0.5, 0.9, 1.0, 1.3, 2.0])
def test_dilate_matches_analytic(factor):
    g = GridSpec(40.0, 1024)
    u = Field.from_function(g, lambda x: np.exp(-(x**2) / 4))
    out = dilate(u, factor)
    want = np.exp(-((factor * g.x) ** 2) / 4)
    inside = np.abs(factor * g.x) < g.L
    assert np.max(np.abs(out.values - want)[inside]) <= 1e-8


def test_dilate_wraps_periodically():
    g = GridSpec(40.0, 1024)
    u = Field.from_function(g, lambda x: np.exp(-(x**2) / 4))
    assert dilate(u, 2.0).values[0] == pytest.approx(1.0, abs=1e-12)


def test_dilate_rejects_nonpositive():
    with pytest.raises(DomainError):
        dilate(Field(SMALL, np.ones(SMALL.N)), 0.0)
