import { ApiClient } from "./api.js";
import { createChatApp } from "./app.js";

const app = createChatApp(document, new ApiClient(""));
void app.start();
