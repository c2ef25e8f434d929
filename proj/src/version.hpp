#pragma once

#define EPISIM_VERSION_STRING "0.1.0"
