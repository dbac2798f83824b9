#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cofree {

using Vec2 = Eigen::Vector2d;

/// Closed line segment in the plane. p0 == p1 is a point.
struct Segment2 {
    Vec2 p0 = Vec2::Zero();
    Vec2 p1 = Vec2::Zero();
};

/// Segment swollen by a radius.
struct Capsule2 {
    Segment2 axis;
    double radius = 0.0;
};

/// Serial planar chain of capsule links mounted at a fixed base.
struct ArmModel {
    Vec2 base_position = Vec2::Zero();
    double base_orientation = 0.0;
    std::vector<double> link_lengths;
    std::vector<double> link_radii;
    std::vector<std::pair<double, double>> joint_limits;
    double joint_velocity_limit = 0.1;  // rad per control step

    std::size_t dof() const { return link_lengths.size(); }

    /// Throws ConfigError when lengths, radii or limits are inconsistent.
    void validate() const;

    /// Sum of link lengths (outer radius of the reachable annulus).
    double reach() const;

    /// Three-link tabletop arm: lengths (0.30, 0.25, 0.15) m, radius 0.03 m,
    /// limits +-2.8 rad, 0.1 rad/step.
    static ArmModel default_arm(const Vec2& base, double base_orientation);
};

/// Link geometry and end-effector pose of one arm configuration.
struct ArmPose {
    std::vector<Segment2> links;
    std::vector<Vec2> joint_origins;  // origin of joint i == links[i].p0
    Vec2 ee = Vec2::Zero();
    double ee_heading = 0.0;
};

/// Minimum Euclidean distance between any two points of the segments.
double segment_closest_distance(const Segment2& a, const Segment2& b);

/// Distance between capsule surfaces after inflating both radii by
/// `inflation`. Negative values mean penetration.
double capsule_distance(const Capsule2& a, const Capsule2& b, double inflation = 0.0);

/// Throws DimensionError on size mismatch, JointLimitError on limit violation.
ArmPose forward_kinematics(const ArmModel& arm, const Eigen::VectorXd& q);

/// Planar position Jacobian of the end effector, 2 x n (m per rad).
Eigen::Matrix<double, 2, Eigen::Dynamic> jacobian(const ArmModel& arm, const Eigen::VectorXd& q);

/// Damped least-squares increment dq = J^T (J J^T + mu^2 I)^-1 dx, clipped
/// componentwise to the joint velocity limit.
Eigen::VectorXd dls_ik_step(const ArmModel& arm, const Eigen::VectorXd& q, const Vec2& dx,
                            double mu);

}  // namespace cofree
