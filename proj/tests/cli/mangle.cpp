// Copyright 2026 The RDV Authors
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

// mangle flip|truncate IN OUT: flips the final byte or drops the last three.
#include <fstream>
#include <iterator>
#include <string>

int main(int argc, char** argv) {
  if (argc != 4) return 1;
  std::ifstream in(argv[2], std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4) return 1;
  const std::string op = argv[1];
  if (op == "flip") {
    bytes.back() = static_cast<char>(bytes.back() ^ 0x01);
  } else if (op == "truncate") {
    bytes.resize(bytes.size() - 3);
  } else {
    return 1;
  }
  std::ofstream(argv[3], std::ios::binary) << bytes;
  return 0;
}
