#include "cqed/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cqed {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // no "-0"
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 8);
    if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
    return {buf, end};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    std::string text = "t_ns";
    for (const auto& n : tr.names) text += "," + n;
    text += '\n';
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        text += format_number(tr.times[k]);
        for (const auto& trace : tr.traces) text += "," + format_number(trace[k]);
        text += '\n';
    }
    out << text;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
    std::string text = result.parameter + "_ghz," + std::string(to_string(result.objective)) + "\n";
    for (const auto& s : result.samples) text += format_number(s.x) + "," + format_number(s.value) + "\n";
    out << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace cqed
