// Pattern: P8 SleepingReceiver
// Expected: NoDeadlock
//
// The receiver blocks until main, after a pause, sends.
package main

import (
	"fmt"
	"time"
)

func receiver(ch chan string, done chan bool) {
	msg := <-ch
	fmt.Println("received", msg)
	done <- true
}

func main() {
	ch := make(chan string)
	done := make(chan bool)
	go receiver(ch, done)
	time.Sleep(500 * time.Millisecond)
	ch <- "ping"
	<-done
}
