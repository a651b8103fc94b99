// Copyright 2026 The Unseen Authors.
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

// Command-line front end: `unseen <subcommand> [flags]`.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric guard.

#ifndef UNSEEN_CLI_H_
#define UNSEEN_CLI_H_

#include <ostream>
#include <string>

namespace unseen {

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

std::string VersionString();

// Hex SHA-256 of a byte string / file contents.
std::string Sha256Hex(const std::string& bytes);
std::string Sha256File(const std::string& path);

}  // namespace unseen

#endif  // UNSEEN_CLI_H_
