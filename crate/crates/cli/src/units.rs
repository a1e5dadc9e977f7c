/// Unit system at the command-line boundary: millimeters and degrees by
/// default, meters and radians with `--si`. Files are always SI.
#[derive(Debug, Clone, Copy)]
pub struct Units {
    pub si: bool,
}

impl Units {
    pub fn length_in(self, v: f64) -> f64 {
        if self.si {
            v
        } else {
            v / 1000.0
        }
    }

    pub fn length_out(self, v: f64) -> f64 {
        if self.si {
            v
        } else {
            v * 1000.0
        }
    }

    pub fn angle_in(self, v: f64) -> f64 {
        if self.si {
            v
        } else {
            v.to_radians()
        }
    }

    pub fn angle_out(self, v: f64) -> f64 {
        if self.si {
            v
        } else {
            v.to_degrees()
        }
    }

    pub fn length_unit(self) -> &'static str {
        if self.si {
            "m"
        } else {
            "mm"
        }
    }

    pub fn angle_unit(self) -> &'static str {
        if self.si {
            "rad"
        } else {
            "deg"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn millimeters_convert_exactly() {
        let u = Units { si: false };
        assert_eq!(u.length_in(25.0), 0.025);
        assert_eq!(u.length_in(100.0), 0.1);
        assert_eq!(Units { si: true }.length_in(0.3), 0.3);
    }
}
