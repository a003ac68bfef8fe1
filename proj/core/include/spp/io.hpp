#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spp/field.hpp"
#include "spp/trajectory.hpp"

namespace spp {

/// Field dump: one header line
/// `HJF1 dim=<d> counts=<c0,...> mins=<...> maxs=<...> periodic=<0/1,...>`
/// then the values as row-major little-endian float64.
void write_field(std::ostream& os, const Field& f);
/// Throws InputError on a malformed header or short payload.
Field read_field(std::istream& is);

/// `HJT1 n=<count> times=<t0,t1,...>` followed by that many field dumps.
void write_time_field(std::ostream& os, const TimeField& tf);
TimeField read_time_field(std::istream& is);

/// One text record per sample: `t px py theta v omega dx dy dtheta`.
void write_trajectory(std::ostream& os, const Trajectory& traj);
/// `dt` is not stored; it is recovered from the first two samples.
Trajectory read_trajectory(std::istream& is);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

void save_field(const std::filesystem::path& p, const Field& f);
Field load_field(const std::filesystem::path& p);
void save_time_field(const std::filesystem::path& p, const TimeField& tf);
TimeField load_time_field(const std::filesystem::path& p);
void save_trajectory(const std::filesystem::path& p, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& p);
void save_text(const std::filesystem::path& p, const std::string& text);
std::string load_text(const std::filesystem::path& p);

}  // namespace spp
