use serde::{Deserialize, Serialize};

use super::{dsl::parse_category, FinCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// `f, g: X -> Y`
    ParallelPair,
    /// `d, c: X -> Y` with common section `r: Y -> X`
    ReflexivePair,
    /// `A <-m- C -f-> B`
    Span,
    /// `A -f-> C <-g- B`
    Cospan,
    /// span whose left leg `m` is marked mono
    MonoSpan,
    /// cospan whose left leg `m` is marked mono
    MonoCospan,
    /// `f: A -> B`
    WalkingArrow,
    Discrete(usize),
}

impl Shape {
    pub fn presentation(self) -> String {
        match self {
            Shape::ParallelPair => "objects X, Y; arrows f: X -> Y, g: X -> Y;".into(),
            Shape::ReflexivePair => {
                "objects X, Y; arrows d: X -> Y, c: X -> Y, r: Y -> X; eq d.r = id_Y, c.r = id_Y;".into()
            }
            Shape::Span => "objects C, A, B; arrows m: C -> A, f: C -> B;".into(),
            Shape::Cospan => "objects A, B, C; arrows f: A -> C, g: B -> C;".into(),
            Shape::MonoSpan => "objects C, A, B; arrows m: C -> A, f: C -> B; mono m;".into(),
            Shape::MonoCospan => "objects A, B, C; arrows m: A -> C, g: B -> C; mono m;".into(),
            Shape::WalkingArrow => "objects A, B; arrows f: A -> B;".into(),
            Shape::Discrete(n) => {
                if n == 0 {
                    "objects ;".into()
                } else {
                    let names: Vec<String> = (0..n).map(|i| format!("O{i}")).collect();
                    format!("objects {};", names.join(", "))
                }
            }
        }
    }

    pub fn from_name(name: &str) -> Option<Shape> {
        Some(match name {
            "parallel_pair" => Shape::ParallelPair,
            "reflexive_pair" => Shape::ReflexivePair,
            "span" => Shape::Span,
            "cospan" => Shape::Cospan,
            "mono_span" => Shape::MonoSpan,
            "mono_cospan" => Shape::MonoCospan,
            "walking_arrow" => Shape::WalkingArrow,
            other => {
                let n = other.strip_prefix("discrete")?.trim_start_matches(['_', '(']).trim_end_matches(')');
                Shape::Discrete(n.parse().ok()?)
            }
        })
    }
}

pub fn standard_shape(shape: Shape) -> FinCategory {
    if let Shape::Discrete(0) = shape {
        return FinCategory::from_table(Vec::new(), Vec::new(), Vec::new(), Vec::new())
            .expect("empty category");
    }
    parse_category(&shape.presentation()).expect("standard shapes are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morphism_counts() {
        assert_eq!(standard_shape(Shape::ParallelPair).morphism_count(), 4);
        assert_eq!(standard_shape(Shape::ReflexivePair).morphism_count(), 7);
        assert_eq!(standard_shape(Shape::Span).morphism_count(), 5);
        assert_eq!(standard_shape(Shape::Discrete(0)).morphism_count(), 0);
        assert_eq!(standard_shape(Shape::Discrete(3)).morphism_count(), 3);
        let ms = standard_shape(Shape::MonoSpan);
        assert_eq!(ms.mono_marks(), &[ms.morphism_index("m").unwrap()]);
    }

    #[test]
    fn names_parse() {
        assert_eq!(Shape::from_name("discrete(2)"), Some(Shape::Discrete(2)));
        assert_eq!(Shape::from_name("discrete_0"), Some(Shape::Discrete(0)));
        assert_eq!(Shape::from_name("cospan"), Some(Shape::Cospan));
        assert_eq!(Shape::from_name("nope"), None);
    }
}
