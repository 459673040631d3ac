//! Premises, witnesses and canonical forms under `x ↦ cx + t`.

mod properties;

use proptest::prelude::*;

proptest! {
    #[test]
    fn verification_is_affine_invariant(case in properties::set_and_map()) {
        properties::check_verification_affine(case)?;
    }

    #[test]
    fn canonical_form_is_orbit_invariant(case in properties::set_and_map()) {
        properties::check_canonical_affine(case)?;
    }
}
