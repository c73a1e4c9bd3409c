//! Built-in configurations for the standard experiments. Where the pump
//! strength is not otherwise fixed it is twice the symmetric threshold.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "ordered-wave",
        summary: "travelling density wave at A/S = 0.3 (N-body)",
        text: include_str!("../presets/ordered-wave.toml"),
    },
    Preset {
        name: "carl",
        summary: "CARL runaway at A/S = 0.8 (N-body)",
        text: include_str!("../presets/carl.toml"),
    },
    Preset {
        name: "beam-slowing",
        summary: "beam slowing with balanced pumps",
        text: include_str!("../presets/beam-slowing.toml"),
    },
    Preset {
        name: "boundaries",
        summary: "stability boundaries for u_t = 3, 100, 200",
        text: include_str!("../presets/boundaries.toml"),
    },
    Preset {
        name: "phase-diagram",
        summary: "analytic regime map on a 16 x 21 grid",
        text: include_str!("../presets/phase-diagram.toml"),
    },
    Preset {
        name: "vlasov",
        summary: "the ordered-wave parameters on the phase-space grid",
        text: include_str!("../presets/vlasov.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn every_preset_parses() {
        for p in PRESETS {
            if let Err(e) = parse_config(p.text) {
                panic!("preset {}: {e}", p.name);
            }
        }
    }

    #[test]
    fn ordered_wave_preset_parameters() {
        let c = parse_config(find("ordered-wave").unwrap().text).unwrap();
        let p = c.params().unwrap();
        assert_eq!((p.delta, p.u_t), (-1.0, 3.0));
        assert!((p.relative_asymmetry() - 0.3).abs() < 1e-12);
        assert!((p.n_u0() + 1.0).abs() < 1e-12);
    }
}
