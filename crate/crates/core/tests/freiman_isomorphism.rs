//! Rectifiable sumsets keep their size and additive structure when moved
//! to the integers along the covering progression.

mod properties;

use proptest::prelude::*;

proptest! {
    #[test]
    fn sumset_size_is_preserved(case in properties::clustered_pair()) {
        properties::check_freiman_cardinality(case)?;
    }

    #[test]
    fn energy_is_preserved(case in properties::clustered_pair()) {
        properties::check_freiman_energy(case)?;
    }
}
