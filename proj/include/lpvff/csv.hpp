#pragma once

#include <string>
#include <vector>

#include "lpvff/evaluation.hpp"
#include "lpvff/trajectory.hpp"

namespace lpvff {

/// Header `t,r0,y,e,u_ff,u_fb`, one row per sample.
std::string traces_csv(const TrackingTraces& tr);

/// Header `rho,theta2_learned,theta2_true`.
std::string figure3_csv(const std::vector<Figure3Row>& rows);

/// Header `name,e_max_ratio,e_2_ratio`.
std::string table_csv(const std::vector<TableRow>& rows);

/// Column-aligned plain-text version of the table.
std::string table_text(const std::vector<TableRow>& rows);

/// Header `t,r0,r1,r2,r3,r4`.
std::string trajectory_csv(const Trajectory& traj);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace lpvff
