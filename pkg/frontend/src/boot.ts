// Browser entry point: mount the app on #app, same-origin service.

import { initApp } from "./main.js";

const root = document.getElementById("app");
if (root) initApp(root);
