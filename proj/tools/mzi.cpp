// Copyright 2026 The mzi-herald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>

#include "mzi_cli.hpp"

int main(int argc, char** argv) {
    const mzi::cli::RunResult result = mzi::cli::run_command_line(argc, argv);
    if (result.output_path && result.exit_code == 0) {
        std::ofstream out(*result.output_path);
        if (!out) {
            std::cout << R"({"error":"InvalidArgument","message":"cannot open output file"})" << '\n';
            return 2;
        }
        out << result.output << '\n';
        return 0;
    }
    std::cout << result.output << '\n';
    return result.exit_code;
}
