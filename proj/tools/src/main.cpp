// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit_app/cli.hpp"

int main(int argc, char **argv) { return kerrcrit::app::cli_main(argc, argv); }
