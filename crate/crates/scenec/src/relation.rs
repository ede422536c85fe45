//! The closed vocabulary of relation templates and camera templates.
//!
//! Every `topology.relation` in a plan must name one of these; anything
//! else is rejected at parse time. Names are case-insensitive and accept
//! `-` and `_` interchangeably, so `PLACE-ON` and `place_on` are the same
//! relation.

use serde::{Deserialize, Serialize};

use crate::geometry::CardinalDir;

/// Vertical alignment component of the adjacency templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalAlign {
    TopFlush,
    BottomFlush,
    Centers,
}

/// A relation template applied to a child object with respect to one or
/// two reference objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    // Planar position
    LeftOf,
    RightOf,
    FrontOf,
    BackOf,
    PlaceOnBase,
    // Planar alignment
    AlignLeft,
    AlignRight,
    AlignFront,
    AlignBack,
    AlignCenterLr,
    AlignCenterFb,
    // Support and containment
    PlaceOn,
    PlaceIn,
    PlaceAnywhere,
    // Height declaration
    Height,
    // Orientation (rotation-only)
    FacingRight,
    FacingLeft,
    FacingFront,
    FacingBack,
    FacingTo,
    FacingOppositeTo,
    FacingSameAs,
    RandomRot,
    OrientByRelativeSide,
    // Fluid placement
    FreeSurfaceAt,
    FloatsAtSurface,
    Submerged,
    ContainsFluid,
    // Symmetry and grouping
    SymmetryAlong,
    Group,
    CopyGroup,
    // On-top templates
    SpawnedOnTop,
    PlacedOnTop,
    CenteredOnRef,
    // Adjacent side templates (12 variants)
    Adjacent(CardinalDir, VerticalAlign),
    // Water-surface templates
    BottomFlushWaterSurface,
    CenterAtWaterSurface,
    TopFlushWaterSurface,
    // Container and bridge templates
    FillsContainerToTop,
    FillsContainerLowerHalf,
    BridgeBetweenAAndB,
    FlushWithPlatformTop,
}

impl Relation {
    /// Parse a relation name. Accepts upper or lower case and either `-`
    /// or `_` as the separator.
    pub fn from_name(name: &str) -> Option<Relation> {
        let canon = name.trim().to_ascii_lowercase().replace('-', "_");
        use Relation::*;
        let rel = match canon.as_str() {
            "left_of" => LeftOf,
            "right_of" => RightOf,
            "front_of" => FrontOf,
            "back_of" => BackOf,
            "place_on_base" => PlaceOnBase,
            "align_left" => AlignLeft,
            "align_right" => AlignRight,
            "align_front" => AlignFront,
            "align_back" => AlignBack,
            "align_center_lr" => AlignCenterLr,
            "align_center_fb" => AlignCenterFb,
            "place_on" => PlaceOn,
            "place_in" => PlaceIn,
            "place_anywhere" => PlaceAnywhere,
            "height" => Height,
            "facing_right" => FacingRight,
            "facing_left" => FacingLeft,
            "facing_front" => FacingFront,
            "facing_back" => FacingBack,
            "facing_to" => FacingTo,
            "facing_opposite_to" => FacingOppositeTo,
            "facing_same_as" => FacingSameAs,
            "random_rot" => RandomRot,
            "orient_by_relative_side" => OrientByRelativeSide,
            "free_surface_at" => FreeSurfaceAt,
            "floats_at_surface" => FloatsAtSurface,
            "submerged" => Submerged,
            "contains_fluid" => ContainsFluid,
            "symmetry_along" => SymmetryAlong,
            "group" => Group,
            "copy_group" => CopyGroup,
            "spawned_on_top" => SpawnedOnTop,
            "placed_on_top" => PlacedOnTop,
            "centered_on_ref" => CenteredOnRef,
            "bottom_flush_water_surface" => BottomFlushWaterSurface,
            "center_at_water_surface" => CenterAtWaterSurface,
            "top_flush_water_surface" => TopFlushWaterSurface,
            "fills_container_to_top" => FillsContainerToTop,
            "fills_container_lower_half" => FillsContainerLowerHalf,
            "bridge_between_a_and_b" => BridgeBetweenAAndB,
            "flush_with_platform_top" => FlushWithPlatformTop,
            _ => {
                return canon
                    .strip_prefix("adjacent_")
                    .and_then(Self::parse_adjacent_suffix)
            }
        };
        Some(rel)
    }

    fn parse_adjacent_suffix(suffix: &str) -> Option<Relation> {
        let sides = [
            ("plus_x_", CardinalDir::PlusX),
            ("minus_x_", CardinalDir::MinusX),
            ("plus_y_", CardinalDir::PlusY),
            ("minus_y_", CardinalDir::MinusY),
        ];
        let (side, rest) = sides
            .iter()
            .find_map(|(prefix, side)| suffix.strip_prefix(prefix).map(|rest| (*side, rest)))?;
        let valign = match rest {
            "top_flush" => VerticalAlign::TopFlush,
            "bottom_flush" => VerticalAlign::BottomFlush,
            "centers" => VerticalAlign::Centers,
            _ => return None,
        };
        Some(Relation::Adjacent(side, valign))
    }

    /// Canonical lower-snake name.
    pub fn name(&self) -> String {
        use Relation::*;
        match self {
            LeftOf => "left_of".into(),
            RightOf => "right_of".into(),
            FrontOf => "front_of".into(),
            BackOf => "back_of".into(),
            PlaceOnBase => "place_on_base".into(),
            AlignLeft => "align_left".into(),
            AlignRight => "align_right".into(),
            AlignFront => "align_front".into(),
            AlignBack => "align_back".into(),
            AlignCenterLr => "align_center_lr".into(),
            AlignCenterFb => "align_center_fb".into(),
            PlaceOn => "place_on".into(),
            PlaceIn => "place_in".into(),
            PlaceAnywhere => "place_anywhere".into(),
            Height => "height".into(),
            FacingRight => "facing_right".into(),
            FacingLeft => "facing_left".into(),
            FacingFront => "facing_front".into(),
            FacingBack => "facing_back".into(),
            FacingTo => "facing_to".into(),
            FacingOppositeTo => "facing_opposite_to".into(),
            FacingSameAs => "facing_same_as".into(),
            RandomRot => "random_rot".into(),
            OrientByRelativeSide => "orient_by_relative_side".into(),
            FreeSurfaceAt => "free_surface_at".into(),
            FloatsAtSurface => "floats_at_surface".into(),
            Submerged => "submerged".into(),
            ContainsFluid => "contains_fluid".into(),
            SymmetryAlong => "symmetry_along".into(),
            Group => "group".into(),
            CopyGroup => "copy_group".into(),
            SpawnedOnTop => "spawned_on_top".into(),
            PlacedOnTop => "placed_on_top".into(),
            CenteredOnRef => "centered_on_ref".into(),
            BottomFlushWaterSurface => "bottom_flush_water_surface".into(),
            CenterAtWaterSurface => "center_at_water_surface".into(),
            TopFlushWaterSurface => "top_flush_water_surface".into(),
            FillsContainerToTop => "fills_container_to_top".into(),
            FillsContainerLowerHalf => "fills_container_lower_half".into(),
            BridgeBetweenAAndB => "bridge_between_a_and_b".into(),
            FlushWithPlatformTop => "flush_with_platform_top".into(),
            Adjacent(side, valign) => {
                let s = match side {
                    CardinalDir::PlusX => "plus_x",
                    CardinalDir::MinusX => "minus_x",
                    CardinalDir::PlusY => "plus_y",
                    CardinalDir::MinusY => "minus_y",
                };
                let v = match valign {
                    VerticalAlign::TopFlush => "top_flush",
                    VerticalAlign::BottomFlush => "bottom_flush",
                    VerticalAlign::Centers => "centers",
                };
                format!("adjacent_{s}_{v}")
            }
        }
    }

    /// How many references the relation consumes: `(min, max)`.
    pub fn ref_count(&self) -> (usize, usize) {
        use Relation::*;
        match self {
            BridgeBetweenAAndB => (2, 2),
            FlushWithPlatformTop => (1, 2),
            // Group anchors and free-standing orientation rows may omit
            // the reference entirely.
            Group | PlaceAnywhere | FreeSurfaceAt | RandomRot | FacingFront | FacingBack
            | FacingLeft | FacingRight => (0, 1),
            _ => (1, 1),
        }
    }

    /// Rotation-only relations never move the subject.
    pub fn is_rotation_only(&self) -> bool {
        use Relation::*;
        matches!(
            self,
            FacingRight
                | FacingLeft
                | FacingFront
                | FacingBack
                | FacingTo
                | FacingOppositeTo
                | FacingSameAs
                | RandomRot
                | OrientByRelativeSide
        )
    }

    /// Relations that constrain the subject's planar anchors. These only
    /// combine with facing modes whose yaw is known before placement.
    pub fn constrains_planar(&self) -> bool {
        use Relation::*;
        matches!(
            self,
            LeftOf
                | RightOf
                | FrontOf
                | BackOf
                | AlignLeft
                | AlignRight
                | AlignFront
                | AlignBack
                | AlignCenterLr
                | AlignCenterFb
                | PlaceOn
                | PlaceIn
                | SpawnedOnTop
                | PlacedOnTop
                | CenteredOnRef
                | Adjacent(_, _)
                | BridgeBetweenAAndB
                | FlushWithPlatformTop
        )
    }

    /// Every relation name in the vocabulary, canonical form.
    pub fn all_names() -> Vec<String> {
        let mut names: Vec<String> = BASE_RELATIONS.iter().map(|r| r.name()).collect();
        for side in [
            CardinalDir::PlusX,
            CardinalDir::MinusX,
            CardinalDir::PlusY,
            CardinalDir::MinusY,
        ] {
            for valign in [
                VerticalAlign::TopFlush,
                VerticalAlign::BottomFlush,
                VerticalAlign::Centers,
            ] {
                names.push(Relation::Adjacent(side, valign).name());
            }
        }
        names
    }
}

const BASE_RELATIONS: &[Relation] = &[
    Relation::LeftOf,
    Relation::RightOf,
    Relation::FrontOf,
    Relation::BackOf,
    Relation::PlaceOnBase,
    Relation::AlignLeft,
    Relation::AlignRight,
    Relation::AlignFront,
    Relation::AlignBack,
    Relation::AlignCenterLr,
    Relation::AlignCenterFb,
    Relation::PlaceOn,
    Relation::PlaceIn,
    Relation::PlaceAnywhere,
    Relation::Height,
    Relation::FacingRight,
    Relation::FacingLeft,
    Relation::FacingFront,
    Relation::FacingBack,
    Relation::FacingTo,
    Relation::FacingOppositeTo,
    Relation::FacingSameAs,
    Relation::RandomRot,
    Relation::OrientByRelativeSide,
    Relation::FreeSurfaceAt,
    Relation::FloatsAtSurface,
    Relation::Submerged,
    Relation::ContainsFluid,
    Relation::SymmetryAlong,
    Relation::Group,
    Relation::CopyGroup,
    Relation::SpawnedOnTop,
    Relation::PlacedOnTop,
    Relation::CenteredOnRef,
    Relation::BottomFlushWaterSurface,
    Relation::CenterAtWaterSurface,
    Relation::TopFlushWaterSurface,
    Relation::FillsContainerToTop,
    Relation::FillsContainerLowerHalf,
    Relation::BridgeBetweenAAndB,
    Relation::FlushWithPlatformTop,
];

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Relation::from_name(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown relation `{s}`")))
    }
}

/// Camera placement templates resolved against the final scene bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CameraTemplate {
    Side(CardinalDir),
    TopDown,
    Perspective,
    InsideWall(CardinalDir),
}

impl CameraTemplate {
    pub fn from_name(name: &str) -> Option<CameraTemplate> {
        let canon = name.trim().to_ascii_lowercase().replace('-', "_");
        let template = match canon.as_str() {
            "side_plus_x" => CameraTemplate::Side(CardinalDir::PlusX),
            "side_minus_x" => CameraTemplate::Side(CardinalDir::MinusX),
            "side_plus_y" => CameraTemplate::Side(CardinalDir::PlusY),
            "side_minus_y" => CameraTemplate::Side(CardinalDir::MinusY),
            "top_down" => CameraTemplate::TopDown,
            "perspective" => CameraTemplate::Perspective,
            "inside_plus_x_wall" => CameraTemplate::InsideWall(CardinalDir::PlusX),
            "inside_minus_x_wall" => CameraTemplate::InsideWall(CardinalDir::MinusX),
            "inside_plus_y_wall" => CameraTemplate::InsideWall(CardinalDir::PlusY),
            "inside_minus_y_wall" => CameraTemplate::InsideWall(CardinalDir::MinusY),
            _ => return None,
        };
        Some(template)
    }

    pub fn name(&self) -> String {
        let dir = |d: &CardinalDir| match d {
            CardinalDir::PlusX => "plus_x",
            CardinalDir::MinusX => "minus_x",
            CardinalDir::PlusY => "plus_y",
            CardinalDir::MinusY => "minus_y",
        };
        match self {
            CameraTemplate::Side(d) => format!("side_{}", dir(d)),
            CameraTemplate::TopDown => "top_down".into(),
            CameraTemplate::Perspective => "perspective".into(),
            CameraTemplate::InsideWall(d) => format!("inside_{}_wall", dir(d)),
        }
    }

    pub fn all() -> Vec<CameraTemplate> {
        let mut out = Vec::new();
        for d in [
            CardinalDir::MinusX,
            CardinalDir::PlusX,
            CardinalDir::MinusY,
            CardinalDir::PlusY,
        ] {
            out.push(CameraTemplate::Side(d));
        }
        out.push(CameraTemplate::TopDown);
        out.push(CameraTemplate::Perspective);
        for d in [
            CardinalDir::MinusX,
            CardinalDir::PlusX,
            CardinalDir::MinusY,
            CardinalDir::PlusY,
        ] {
            out.push(CameraTemplate::InsideWall(d));
        }
        out
    }
}

impl Serialize for CameraTemplate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for CameraTemplate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        CameraTemplate::from_name(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown camera template `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_every_name() {
        for name in Relation::all_names() {
            let rel = Relation::from_name(&name).unwrap_or_else(|| panic!("{name} must parse"));
            assert_eq!(rel.name(), name);
        }
        for template in CameraTemplate::all() {
            assert_eq!(
                CameraTemplate::from_name(&template.name()),
                Some(template)
            );
        }
    }

    #[test]
    fn accepts_upper_kebab_spelling() {
        assert_eq!(Relation::from_name("PLACE-ON"), Some(Relation::PlaceOn));
        assert_eq!(
            Relation::from_name("ADJACENT_PLUS_X_TOP_FLUSH"),
            Some(Relation::Adjacent(CardinalDir::PlusX, VerticalAlign::TopFlush))
        );
        assert_eq!(
            Relation::from_name("FILLS-CONTAINER-LOWER-HALF"),
            Some(Relation::FillsContainerLowerHalf)
        );
    }

    #[test]
    fn rejects_unknown_names() {
        assert_eq!(Relation::from_name("hover_above"), None);
        assert_eq!(Relation::from_name("adjacent_plus_z_top_flush"), None);
        assert_eq!(CameraTemplate::from_name("behind"), None);
    }

    #[test]
    fn vocabulary_size() {
        // 41 base relations + 12 adjacency variants.
        assert_eq!(Relation::all_names().len(), 53);
        assert_eq!(CameraTemplate::all().len(), 10);
    }
}
