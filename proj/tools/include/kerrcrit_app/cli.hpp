// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace kerrcrit::app
{

// Exit codes: 0 success, 1 a task or check failed, 2 invalid configuration
// or command line.
int cli_main(int argc, char **argv);

}  // namespace kerrcrit::app
