// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_LOG_HPP
#define SCIPNN_LOG_HPP

#include <functional>
#include <string>

namespace scipnn {

using WarningHandler = std::function<void(const std::string&)>;

// Replaces the process-wide warning sink and returns the previous one. The
// default writes "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace scipnn

#endif  // SCIPNN_LOG_HPP
