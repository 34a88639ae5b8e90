#pragma once

#include <string>
#include <vector>

#include "temple/control.hpp"
#include "temple/decay.hpp"
#include "temple/profile.hpp"
#include "temple/system.hpp"
#include "temple/tracking.hpp"

namespace temple::io {

// Profile CSV: header "x_left,w1,..,wn", one row per cell giving the cell
// start and its invariant values, plus a terminal sentinel row at x = b
// repeating the last values. The loader accepts files with or without the
// sentinel; rows must increase strictly and fit inside [a,b].
Profile load_profile_csv(const std::string& path, double a, double b, int n);
void save_profile_csv(const std::string& path, const Profile& profile);

// Control CSV: header "t,w1,..,wn", rows are right-continuous segments
// starting at the given times; the first row must start at t = 0.
BoundaryControl load_control_csv(const std::string& path, int n);
void save_control_csv(const std::string& path, const BoundaryControl& control);

// One JSON object per line: time, kind, position, 1-based families, and
// the field-wide front counts around the event.
void save_event_log_jsonl(const std::string& path,
                          const std::vector<Event>& events);

// Space-time diagram data: one straight front piece per row.
void save_segments_csv(const std::string& path,
                       const std::vector<FrontSegment>& segments);

std::string validation_report_json(const ValidationReport& report);
std::string oleinik_report_json(const OleinikReport& report, int n_nu);
std::string oleinik_report_text(const OleinikReport& report, int n_nu);
std::string k_rho_report_json(const KRhoReport& report, double rho,
                              const std::string& mode);
std::string plan_json(const SynthesisPlan& plan, double a, double b);

struct PlanData {
    double a = 0, b = 0;
    double tau = 0;
    int nu = 1;
    BoundaryControl control_a, control_b;
};

// Reload the control schedules of an exported plan.
PlanData load_plan_json(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace temple::io
