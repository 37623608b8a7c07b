#pragma once

#include <cmath>

namespace pairtime {

// Plain 3-vector. Used for momenta (keV) and positions (mm).
struct Vec3
{
	double x = 0.0;
	double y = 0.0;
	double z = 0.0;

	constexpr Vec3& operator+=(const Vec3& o)
	{
		x += o.x;
		y += o.y;
		z += o.z;
		return *this;
	}
	constexpr Vec3& operator-=(const Vec3& o)
	{
		x -= o.x;
		y -= o.y;
		z -= o.z;
		return *this;
	}
	constexpr Vec3& operator*=(double s)
	{
		x *= s;
		y *= s;
		z *= s;
		return *this;
	}

	friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
	friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
	friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
	friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
	friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
	friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
	friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b)
{
	return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
	return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// hypot avoids overflow/underflow for extreme components.
inline double norm(const Vec3& v)
{
	return std::hypot(v.x, v.y, v.z);
}

inline bool is_finite(const Vec3& v)
{
	return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Angle between two non-zero vectors in radians. atan2 form stays accurate
/// near 0 and pi where acos loses digits.
inline double angle_between(const Vec3& a, const Vec3& b)
{
	return std::atan2(norm(cross(a, b)), dot(a, b));
}

} // namespace pairtime
