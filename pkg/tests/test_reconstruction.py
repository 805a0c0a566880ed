"""Recovering ambient fields and forms from several reductions."""

import numpy as np
import pytest

from multisym import (
    IncompatibleReductionsError,
    annihilator_intersection_dim,
    kernel_intersection_dim,
    reconstruct_field,
    reconstruct_form,
    reduce_form,
)


def test_kernel_intersection_osc_spin(osc_spin, rng):
    projs = [osc_spin.schemes["sl123"].quotient,
             osc_spin.schemes["so456"].quotient]
    for g in osc_spin.samples(rng, 5):
        assert kernel_intersection_dim(projs, g) == 0
        assert kernel_intersection_dim(projs[:1], g) == 3


def test_field_reconstruction_osc_spin(osc_spin, rng):
    names = ("sl123", "so456")
    schemes = [osc_spin.schemes[n] for n in names]
    projs = [s.quotient for s in schemes]
    goldens = [osc_spin.golden["reduced"][n]["fields"] for n in names]
    for g in osc_spin.samples(rng, 3):
        for i in range(len(osc_spin.basis)):
            reduced = [fields[i] if fields[i] is not None
                       else (lambda y: np.zeros(3)) for fields in goldens]
            val, residual = reconstruct_field(reduced, projs, g)
            assert residual < 1e-10
            assert np.allclose(val, osc_spin.basis[i](g), atol=1e-8)


def test_single_projection_underdetermined(osc_spin, rng):
    projs = [osc_spin.schemes["sl123"].quotient]
    fields = osc_spin.golden["reduced"]["sl123"]["fields"]
    g = osc_spin.samples(rng, 1)[0]
    with pytest.raises(IncompatibleReductionsError):
        reconstruct_field([fields[3]], projs, g)


def test_inconsistent_data_rejected(osc_spin, rng):
    # overdetermined stack: the same projection twice with conflicting data
    sl = osc_spin.schemes["sl123"].quotient
    so = osc_spin.schemes["so456"].quotient
    g = osc_spin.samples(rng, 1)[0]
    good = osc_spin.golden["reduced"]["sl123"]["fields"][3]
    zero = lambda y: np.zeros(3)
    bad = lambda y: np.array([5.0, 0.0, 0.0])
    with pytest.raises(IncompatibleReductionsError):
        reconstruct_field([good, zero, bad], [sl, so, sl], g)


def test_annihilator_dims_r8(r8_volume, rng):
    Zs = [r8_volume.schemes[k].w for k in ("za", "zb", "zc")]
    g = r8_volume.samples(rng, 1)[0]
    assert annihilator_intersection_dim(Zs[:1], 6, g) == 13
    assert annihilator_intersection_dim(Zs[:2], 6, g) == 4
    assert annihilator_intersection_dim(Zs, 6, g) == 0


def test_form_reconstruction_r8(r8_volume, rng):
    schemes = [r8_volume.schemes[k] for k in ("za", "zb", "zc")]
    invariants = [(reduce_form(s), s.w, s.quotient) for s in schemes]
    for g in r8_volume.samples(rng, 3):
        T, residual = reconstruct_form(invariants, 6, g)
        assert residual < 1e-12
        assert np.max(np.abs(T.coeffs - r8_volume.theta(g).coeffs)) < 1e-12


def test_form_reconstruction_underdetermined(r8_volume, rng):
    schemes = [r8_volume.schemes[k] for k in ("za", "zb")]
    invariants = [(reduce_form(s), s.w, s.quotient) for s in schemes]
    g = r8_volume.samples(rng, 1)[0]
    with pytest.raises(IncompatibleReductionsError):
        reconstruct_form(invariants, 6, g)
