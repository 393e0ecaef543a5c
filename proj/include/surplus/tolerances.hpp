#pragma once

namespace surplus {

/// Numerical thresholds shared across modules. Functionals used for
/// separation are normalized to ||z||_inf <= 1, so the absolute values below
/// are meaningful on probability vectors.
struct Tolerances {
    double feas = 1e-9;     // LP residuals; comparisons use feas * (1 + |value|)
    double margin = 1e-7;   // a set is exposed iff its separation margin exceeds this
    double face = 1e-9;     // |p . z| <= face  =>  p lies on the face cut out by z
    double rank = 1e-9;     // relative singular-value cutoff for affine dimension
    double p = 1e-6;        // virtual extraction verdict: p* <= p
    double mass = 1e-8;     // dual rows with lambda_u <= mass are skipped
    double surplus = 1e-8;  // verify_menu slack on "= 0" and "<= eps" tests
};

}  // namespace surplus
