// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kerrcrit
{

unsigned default_thread_count()
{
  if (const char *env = std::getenv("KERRCRIT_THREADS"))
  {
    try
    {
      const long v = std::stol(env);
      if (v >= 1)
      {
        return static_cast<unsigned>(v);
      }
    }
    catch (const std::exception &)
    {
      // Unparseable values fall through to the default.
    }
  }
  return 1;
}

}  // namespace kerrcrit
