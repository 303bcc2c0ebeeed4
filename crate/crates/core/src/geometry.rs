//! Axis-aligned rectangle obstacle maps, clearance queries and ray casting.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("rectangle must satisfy x_min < x_max and y_min < y_max (got [{x_min}, {x_max}] x [{y_min}, {y_max}])")]
    InvalidRect {
        x_min: f64,
        y_min: f64,
        x_max: f64,
        y_max: f64,
    },
    #[error("obstacle {index} does not intersect the arena")]
    ObstacleOutsideArena { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Closed axis-aligned rectangle `[x_min, x_max] x [y_min, y_max]`, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x_min: T,
    pub y_min: T,
    pub x_max: T,
    pub y_max: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(x_min: T, y_min: T, x_max: T, y_max: T) -> Result<Self, GeometryError> {
        let ok = x_min < x_max
            && y_min < y_max
            && [x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite());
        if !ok {
            return Err(GeometryError::InvalidRect {
                x_min: x_min.to_f64_lossy(),
                y_min: y_min.to_f64_lossy(),
                x_max: x_max.to_f64_lossy(),
                y_max: y_max.to_f64_lossy(),
            });
        }
        Ok(Self { x_min, y_min, x_max, y_max })
    }

    pub fn width(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> T {
        self.y_max - self.y_min
    }

    pub fn diagonal(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point<T> {
        let half = T::of(0.5);
        Point::new((self.x_min + self.x_max) * half, (self.y_min + self.y_max) * half)
    }

    pub fn contains(&self, p: Point<T>) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    pub fn intersects(&self, other: &Rect<T>) -> bool {
        self.x_min <= other.x_max
            && other.x_min <= self.x_max
            && self.y_min <= other.y_max
            && other.y_min <= self.y_max
    }

    /// Signed distance from `p` to the nearest edge, positive inside.
    pub fn inner_clearance(&self, p: Point<T>) -> T {
        (p.x - self.x_min)
            .min(self.x_max - p.x)
            .min(p.y - self.y_min)
            .min(self.y_max - p.y)
    }
}

/// World bounds plus the obstacles inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleMap<T> {
    arena: Rect<T>,
    obstacles: Vec<Rect<T>>,
}

impl<T: Scalar> ObstacleMap<T> {
    pub fn new(arena: Rect<T>, obstacles: Vec<Rect<T>>) -> Result<Self, GeometryError> {
        if let Some(index) = obstacles.iter().position(|o| !o.intersects(&arena)) {
            return Err(GeometryError::ObstacleOutsideArena { index });
        }
        Ok(Self { arena, obstacles })
    }

    pub fn arena(&self) -> &Rect<T> {
        &self.arena
    }

    pub fn obstacles(&self) -> &[Rect<T>] {
        &self.obstacles
    }

    /// Same arena with one more obstacle.
    pub fn with_obstacle(&self, obstacle: Rect<T>) -> Result<Self, GeometryError> {
        let mut obstacles = self.obstacles.clone();
        obstacles.push(obstacle);
        Self::new(self.arena, obstacles)
    }

    /// Center distance from `p` to the closest obstacle, `None` for an empty map.
    pub fn nearest_obstacle_distance(&self, p: Point<T>) -> Option<T> {
        self.obstacles
            .iter()
            .map(|r| point_rect_distance(p, r))
            .reduce(T::min)
    }
}

/// Euclidean distance from `p` to the closed rectangle; zero inside.
pub fn point_rect_distance<T: Scalar>(p: Point<T>, r: &Rect<T>) -> T {
    let zero = T::zero();
    let dx = (r.x_min - p.x).max(zero).max(p.x - r.x_max);
    let dy = (r.y_min - p.y).max(zero).max(p.y - r.y_max);
    dx.hypot(dy)
}

/// Clearance between a disc of radius `rover_radius` centered at `p` and the
/// nearest obstacle, floored at zero. An empty map yields the arena diagonal.
pub fn min_distance_to_obstacles<T: Scalar>(p: Point<T>, map: &ObstacleMap<T>, rover_radius: T) -> T {
    match map.nearest_obstacle_distance(p) {
        Some(d) => (d - rover_radius).max(T::zero()),
        None => map.arena.diagonal(),
    }
}

/// Whether a disc of radius `rover_radius` at `p` touches an obstacle or the
/// arena boundary (or lies outside the arena). Touching counts.
pub fn is_collision<T: Scalar>(p: Point<T>, rover_radius: T, map: &ObstacleMap<T>) -> bool {
    map.arena.inner_clearance(p) <= rover_radius
        || map
            .nearest_obstacle_distance(p)
            .is_some_and(|d| d <= rover_radius)
}

/// Smallest `t >= 0` with `origin + t * direction` on the closed rectangle.
pub fn ray_rect_intersection<T: Scalar>(origin: Point<T>, direction: Point<T>, r: &Rect<T>) -> Option<T> {
    let (enter, exit) = slab_interval(origin, direction, r)?;
    let t = enter.max(T::zero());
    (t <= exit).then_some(t)
}

/// Distance along the ray from a point inside `arena` to its boundary.
/// Points outside the arena are already past the wall: returns 0.
pub fn ray_exit_distance<T: Scalar>(origin: Point<T>, direction: Point<T>, arena: &Rect<T>) -> T {
    match slab_interval(origin, direction, arena) {
        Some((enter, exit)) if enter <= T::zero() && exit >= T::zero() => exit,
        _ => T::zero(),
    }
}

/// Parametric `[t_enter, t_exit]` of the full line within the rectangle.
fn slab_interval<T: Scalar>(origin: Point<T>, direction: Point<T>, r: &Rect<T>) -> Option<(T, T)> {
    let mut enter = T::neg_infinity();
    let mut exit = T::infinity();
    for (o, d, lo, hi) in [
        (origin.x, direction.x, r.x_min, r.x_max),
        (origin.y, direction.y, r.y_min, r.y_max),
    ] {
        if d == T::zero() {
            if o < lo || o > hi {
                return None;
            }
        } else {
            let t1 = (lo - o) / d;
            let t2 = (hi - o) / d;
            enter = enter.max(t1.min(t2));
            exit = exit.min(t1.max(t2));
        }
    }
    (enter <= exit).then_some((enter, exit))
}
