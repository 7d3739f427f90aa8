// Copyright 2026 The Soundlab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SOUNDLAB_CLI_H_
#define SOUNDLAB_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace soundlab {

// Runs `soundlab <args...>`; args[0] is the subcommand. Returns 0 on
// success, 2 on a usage error and 1 on a runtime error, with diagnostics on
// `err`.
int RunSubcommand(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err);

}  // namespace soundlab

#endif  // SOUNDLAB_CLI_H_
