#pragma once

#define REGRAPH_VERSION_MAJOR 0
#define REGRAPH_VERSION_MINOR 1
#define REGRAPH_VERSION_PATCH 0
#define REGRAPH_VERSION "0.1.0"
