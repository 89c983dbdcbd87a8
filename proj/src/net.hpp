// Copyright 2026 The pdstore Authors.
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

#pragma once

#include <cstdint>
#include <string>

namespace pds::net {

// Both return a socket fd or -1 with `error` filled in.
int listen_tcp(const std::string& host, uint16_t port, uint16_t* bound_port, std::string* error);
int connect_tcp(const std::string& host, uint16_t port, std::string* error);
void set_nodelay(int fd);

}  // namespace pds::net
