// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <string>

#include "rmg/game.hpp"

namespace rmg {

/// Parse an instance from "rmg-v1" JSON text. Validates before returning.
RMGInstance parse_instance(const std::string& json_text);

/// Serialize an instance to "rmg-v1" JSON. Numbers are written with 17
/// significant digits so that serialization round-trips exactly and output
/// bytes are stable across runs.
std::string serialize_instance(const RMGInstance& inst);

/// Parse a policy from "rmg-policy-v1" JSON text and validate it against the
/// instance.
Policy parse_policy(const std::string& json_text, const RMGInstance& inst);

/// Serialize a policy to "rmg-policy-v1" JSON.
std::string serialize_policy(const Policy& policy);

/// File helpers; throw std::runtime_error on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

RMGInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const RMGInstance& inst);
Policy load_policy(const std::string& path, const RMGInstance& inst);
void save_policy(const std::string& path, const Policy& policy);

} // namespace rmg
